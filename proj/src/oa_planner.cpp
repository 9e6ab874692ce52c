#include "napsched/oa_planner.hpp"

#include <algorithm>
#include <stdexcept>

namespace napsched {

namespace {
constexpr double kDensityTol = 1e-9;
}

double OAPlan::speed_at(double t) const {
    if (segments_.empty()) return 0.0;
    for (const Segment& s : segments_)
        if (t < s.end_time) return s.density;
    return 0.0;
}

double OAPlan::initial_speed() const { return segments_.empty() ? 0.0 : segments_.front().density; }

double OAPlan::density_for(std::int64_t job_id) const {
    for (const auto& [id, idx] : owners_)
        if (id == job_id) return segments_[idx].density;
    throw std::invalid_argument("plan does not contain job " + std::to_string(job_id));
}

OAPlan plan(double t, std::span<const PendingJob> pending) {
    std::vector<PendingJob> jobs(pending.begin(), pending.end());
    for (const PendingJob& j : jobs) {
        if (!(j.deadline > t))
            throw std::invalid_argument("plan: job " + std::to_string(j.id) +
                                        " deadline not after plan base time");
        if (j.remaining_work < 0.0)
            throw std::invalid_argument("plan: job " + std::to_string(j.id) +
                                        " has negative remaining work");
    }
    std::sort(jobs.begin(), jobs.end(), [](const PendingJob& a, const PendingJob& b) {
        return a.deadline != b.deadline ? a.deadline < b.deadline : a.id < b.id;
    });

    std::vector<OAPlan::Segment> segments;
    std::vector<std::pair<std::int64_t, std::size_t>> owners;
    owners.reserve(jobs.size());

    std::size_t start = 0;
    double tau = t;
    while (start < jobs.size()) {
        // Pass 1: exact maximum prefix density from tau.
        double best = -1.0;
        double acc = 0.0;
        for (std::size_t k = start; k < jobs.size(); ++k) {
            acc += jobs[k].remaining_work;
            if (k + 1 < jobs.size() && jobs[k + 1].deadline == jobs[k].deadline) continue;
            best = std::max(best, acc / (jobs[k].deadline - tau));
        }
        // Pass 2: latest deadline within tolerance of the maximum.
        std::size_t pick = start;
        double pick_density = 0.0;
        acc = 0.0;
        for (std::size_t k = start; k < jobs.size(); ++k) {
            acc += jobs[k].remaining_work;
            if (k + 1 < jobs.size() && jobs[k + 1].deadline == jobs[k].deadline) continue;
            const double density = acc / (jobs[k].deadline - tau);
            if (density >= best - kDensityTol) {
                pick = k;
                pick_density = density;
            }
        }
        const std::size_t seg_index = segments.size();
        segments.push_back({jobs[pick].deadline, pick_density});
        for (std::size_t k = start; k <= pick; ++k) owners.emplace_back(jobs[k].id, seg_index);
        tau = jobs[pick].deadline;
        start = pick + 1;
    }
    return OAPlan(t, std::move(segments), std::move(owners));
}

double hypothetical_speed(double t, std::span<const PendingJob> pending,
                          const PendingJob& candidate) {
    std::vector<PendingJob> merged(pending.begin(), pending.end());
    merged.push_back(candidate);
    return plan(t, merged).density_for(candidate.id);
}

}  // namespace napsched
