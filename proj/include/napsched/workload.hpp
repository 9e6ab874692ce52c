#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "napsched/power_model.hpp"

namespace napsched {

/// @brief One job of an online instance.
///
/// Work may only run inside the window [release, deadline); a job that is
/// rejected (or never finished) forfeits its value, measured in the same
/// units as energy.
struct Job {
    std::int64_t id = 0;
    double release = 0.0;
    double deadline = 0.0;
    double work = 0.0;
    double value = 0.0;
};

inline double value_density(const Job& job) { return value_density(job.value, job.work); }
inline double profitable_speed(const PowerModel& m, const Job& job) {
    return profitable_speed(m, job.value, job.work);
}

/// @brief A problem instance: the processor model plus jobs sorted by
/// (release, id). Immutable by convention once built.
struct Instance {
    PowerModel model{};
    std::vector<Job> jobs{};
};

/// @brief Collect invariant violations: duplicate ids, empty windows,
/// negative work or value, jobs out of (release, id) order, invalid model.
/// Empty result means the instance is well-formed.
std::vector<std::string> validate(const Instance& inst);

/// @brief splitmix64 generator. All randomness in this library flows through
/// it so that instances are reproducible bit-for-bit from a seed, including
/// across reimplementations in other languages.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform double in [0, 1): top 53 bits of next() scaled by 2^-53.
    double next_unit();

    /// Uniform double in [lo, hi]: lo + next_unit() * (hi - lo).
    double next_in(double lo, double hi);

private:
    std::uint64_t state_;
};

/// @brief Parameter ranges for gen_random. All draws are uniform.
struct RandomSpec {
    std::int64_t n = 0;          ///< number of jobs, >= 0
    double release_span = 1.0;   ///< releases drawn from [0, release_span]
    double window_min = 1.0;     ///< deadline = release + window, window > 0
    double window_max = 1.0;
    double work_min = 1.0;       ///< work > 0
    double work_max = 1.0;
    double value_min = 0.0;      ///< value >= 0
    double value_max = 0.0;

    /// @throws std::invalid_argument on degenerate ranges.
    void validate() const;
};

/// @brief Deterministic random instance from a seed.
///
/// Field derivation, fixed for cross-implementation reproducibility: one
/// SplitMix64 stream seeded with @p seed; job i (i = 0..n-1, also its id)
/// consumes four consecutive next_unit() draws in the order release, window,
/// work, value, each mapped onto its range as lo + u*(hi-lo). Jobs are then
/// sorted by (release, id).
Instance gen_random(std::uint64_t seed, const PowerModel& model, const RandomSpec& spec);

/// @brief The adversarial family: n identical jobs of the given work and
/// value in abutting windows of length work/critical_speed starting at 0.
/// @throws std::invalid_argument when critical_speed is 0 (beta = 0).
Instance gen_adversarial(const PowerModel& model, int n, double work, double value);

/// @brief Closed-form costs of the two trivial strategies on the adversarial
/// family, their ratio, and the ratio's n->infinity limit.
struct AdversarialBenchmark {
    double reject_all = 0.0;  ///< n * value
    double accept_all = 0.0;  ///< gamma + n * work * per_work_cost(s_cr)
    double ratio = 0.0;       ///< reject_all / accept_all
    double asymptote = 0.0;   ///< (value/work) * s_cr / power(s_cr)
};
AdversarialBenchmark adversarial_benchmark_cost(const PowerModel& model, int n, double work,
                                                double value);

/// @brief Max value density over jobs with value < value_cap (all jobs when
/// the cap is absent); 0 when no job qualifies. Zero-work jobs report the
/// infinite sentinel density.
double max_value_density(const Instance& inst, std::optional<double> value_cap = {});

/// @brief Parse an instance from its JSON text form.
///
/// Unknown fields are accepted and reported into @p warnings when given;
/// missing or mistyped fields raise a parse error naming the field.
/// @throws std::runtime_error with diagnostics on malformed input.
Instance parse_instance(const std::string& json_text, std::vector<std::string>* warnings = nullptr);

/// @brief Serialize to the canonical JSON form: object with keys alpha, beta,
/// gamma, max_speed (null when unbounded) and jobs[{id,r,d,w,v}], numbers as
/// shortest round-trip decimals. read/parse of the output reproduces every
/// field bit-exactly.
std::string serialize_instance(const Instance& inst);

Instance read_instance(const std::string& path, std::vector<std::string>* warnings = nullptr);
void write_instance(const Instance& inst, const std::string& path);

}  // namespace napsched
