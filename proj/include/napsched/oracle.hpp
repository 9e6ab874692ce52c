#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "napsched/sim_engine.hpp"

namespace napsched {

/// Subset enumeration is 2^n; above this the oracle refuses.
inline constexpr int kOracleJobLimit = 16;

/// @brief Thrown when an instance is too large for exact enumeration.
class OracleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// @brief Minimum dynamic energy (power speed^alpha, no static term) that
/// completes every job inside its window [release, deadline): the classic
/// iterated densest-interval construction with timeline compression.
double yds_energy(std::vector<Job> jobs, double alpha);

/// @brief Provable lower bound on any schedule's cost: minimum over accepted
/// subsets S of
///   gamma·[S nonempty]
///   + max(yds_energy(S), total work of S at the critical per-work rate)
///   + value of everything outside S.
/// Each term lower-bounds a cost component of any schedule completing
/// exactly S.
/// @throws OracleRefusal when the instance has more than kOracleJobLimit jobs.
double lower_bound(const Instance& inst);

/// @brief Feasible upper bound: minimum over subsets of rejected value plus
/// the cost of an offline schedule for the subset (planned speeds floored at
/// the critical speed, wake exactly at each burst start, sleep immediately
/// when nothing is pending). Ties prefer the lowest subset bitmask.
struct UpperBound {
    double cost = 0.0;
    std::vector<std::int64_t> accepted{};  ///< ids behind the witness
    Trace witness{};                       ///< passes feasibility_check
};
UpperBound upper_bound(const Instance& inst);

/// @brief Lower/upper sandwich around the (NP-hard) offline optimum. When
/// certified the bracket pins the optimum to 1e-6 relative.
struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    bool certified = false;
};
Bracket bracket(const Instance& inst);

/// @brief Cheap sound lower bound with no enumeration: every job pays the
/// cheaper of its value and its work at the critical per-work rate.
double cheap_lower_bound(const Instance& inst);

}  // namespace napsched
