#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace napsched {

/// @brief Remaining accepted work visible to the planner at one instant.
struct PendingJob {
    std::int64_t id = 0;
    double deadline = 0.0;        ///< strictly after the planning instant
    double remaining_work = 0.0;  ///< >= 0
};

/// @brief Piecewise-constant speed plan over remaining work: an ordered list
/// of critical intervals, each ending at a pending-job deadline, with
/// strictly decreasing densities (the planned speeds).
class OAPlan {
public:
    struct Segment {
        double end_time = 0.0;
        double density = 0.0;
    };

    OAPlan() = default;
    OAPlan(double base_time, std::vector<Segment> segments,
           std::vector<std::pair<std::int64_t, std::size_t>> owners)
        : base_time_(base_time), segments_(std::move(segments)), owners_(std::move(owners)) {}

    bool empty() const { return segments_.empty(); }
    double base_time() const { return base_time_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// @brief Planned speed at time t: the density of the segment whose span
    /// [previous end, end) contains t. A segment boundary reports the later
    /// segment; at or past the last end time the speed is 0. Times before
    /// base_time clamp to the first segment.
    double speed_at(double t) const;

    /// @brief Density of the first segment; 0 for an empty plan.
    double initial_speed() const;

    /// @brief Density of the segment the given pending job was packed into.
    /// @throws std::invalid_argument for ids not in the planned set.
    double density_for(std::int64_t job_id) const;

private:
    double base_time_ = 0.0;
    std::vector<Segment> segments_{};
    std::vector<std::pair<std::int64_t, std::size_t>> owners_{};  // job id -> segment index
};

/// @brief Build the plan at instant @p t: repeatedly extract the densest
/// prefix interval (t', tau] over remaining work, where tau ranges over
/// pending deadlines and density is work-with-deadline-inside over length.
/// Ties within 1e-9 go to the latest deadline. Each job lands in the segment
/// containing its deadline.
/// @throws std::invalid_argument when a deadline is not strictly after t.
OAPlan plan(double t, std::span<const PendingJob> pending);

/// @brief Speed the plan would assign a not-yet-accepted job: plan t with
/// pending plus the candidate (remaining_work = its full work) and read the
/// candidate's segment density. The pending set is not mutated; the
/// candidate's id must not collide with a pending id.
double hypothetical_speed(double t, std::span<const PendingJob> pending,
                          const PendingJob& candidate);

}  // namespace napsched
