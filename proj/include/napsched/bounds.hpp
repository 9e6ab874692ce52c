#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "napsched/oracle.hpp"
#include "napsched/schedulers.hpp"

namespace napsched {

/// @brief Worst-case competitive-ratio certificate for custom parameters:
///   max(c2^(a-1)·a², a^a)·(1+mu) + max(2+eta, 1+4/c1)
/// with eta = max(delta_max_low·s_cr/power(s_cr), b^(a-1)) and
/// mu = b^(a-1)/(c2·b-1)^a. delta_max_low is the max value density among jobs
/// of value below c1·gamma (max_value_density with that cap).
/// @throws std::domain_error when b < 1/c2.
double theorem2_bound(const PowerModel& model, const SchedulerParams& params,
                      double delta_max_low, double b);

/// @brief Sharpest guarantee available under default parameters.
///
/// The base guarantee a^a + 2ea applies when every job's value clears the
/// floor 8·gamma/(2+3a) (name "value_floored") or when the low-value density
/// ceiling stays under b^(a-1)·power(s_cr)/s_cr (name "base_default");
/// otherwise the density-adjusted fallback a^a + 2ea +
/// delta_max_low·s_cr/power(s_cr) applies (name "density_adjusted").
struct NamedBound {
    std::string name;
    double value = 0.0;
};
NamedBound corollary_bounds(const PowerModel& model, double delta_max_low, double min_value);

/// @brief Certificate for the speed-capped variant:
///   a^a·(1+mu) + max(2+eta, 1+4/c1)
/// with penalty ratio gamma_ratio = max_j profitable_speed(j)/T,
/// eta = max(delta_max_low·s_cr/power(s_cr), gamma_ratio^(a-1)·b^(a-1)) and
/// mu = gamma_ratio^(a-1)·b^(a-1)/(b-1)^a.
/// @throws std::domain_error when b < 1 or gamma_ratio < 0.
double theorem4_bound(const PowerModel& model, const SchedulerParams& params,
                      double gamma_ratio, double b, double delta_max_low);

/// @brief Penalty ratio of an instance under its speed cap: the largest
/// profitable speed over the cap. Zero-work jobs are skipped (they finish
/// instantly at any speed); 0 when no job contributes.
/// @throws std::invalid_argument when the model carries no cap.
double penalty_ratio(const Instance& inst);

/// @brief One certification row; see write_report_csv for the column set.
struct BoundRow {
    std::string instance_id;
    int n = 0;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    std::optional<double> max_speed{};
    double delta_max_low = 0.0;           ///< density ceiling entering the bound
    double cost = 0.0;                    ///< simulated cost of the scheduler
    double lower = 0.0;                   ///< bracket lower (or cheap bound when refused)
    std::optional<double> upper{};        ///< absent when enumeration refused
    bool certified = false;
    std::string bound_name;
    double bound_value = 0.0;
    std::optional<double> ratio_upper{};  ///< cost / upper
    std::optional<double> ratio_lower{};  ///< cost / lower, diagnostic only
    bool pass = true;                     ///< cost <= bound_value·upper + 1e-6 when upper known
};

/// @brief A batch of instances to certify against a bound.
struct Experiment {
    std::vector<std::pair<std::string, Instance>> instances;  ///< (id, instance)
    std::string scheduler = "A";
    std::optional<SchedulerParams> params{};  ///< defaults per model when absent
    /// Bound selection: "auto" picks the speed-capped certificate for capped
    /// models under A_T and the sharpest default guarantee otherwise;
    /// "general" forces theorem2_bound; "speed_capped" forces theorem4_bound.
    std::string bound = "auto";
};

/// @brief Simulate, bracket and check each instance. Single-threaded and
/// deterministic: row order follows the instance list.
std::vector<BoundRow> run_experiment(const Experiment& exp);

/// @brief CSV with header instance_id,n,alpha,beta,gamma,T,delta_max,cost_A,
/// lb,ub,certified,bound_name,bound_value,ratio_ub,pass. Optional fields
/// print empty; numbers print in shortest round-trip form; byte-deterministic
/// for a fixed row list.
void write_report_csv(const std::vector<BoundRow>& rows, std::ostream& out);

bool all_pass(const std::vector<BoundRow>& rows);

/// Seeded corpora behind the certification suites. Mixed alpha in {2,3},
/// beta=1, gamma=2, up to 8 jobs per instance; value ranges steer the density
/// regime. The speed-capped corpus sets per-instance caps so penalty ratios
/// land in [0.5, 4].
std::vector<std::pair<std::string, Instance>> corpus_low_density(int count, std::uint64_t seed);
std::vector<std::pair<std::string, Instance>> corpus_high_density(int count, std::uint64_t seed);
std::vector<std::pair<std::string, Instance>> corpus_speed_capped(int count, std::uint64_t seed);

}  // namespace napsched
