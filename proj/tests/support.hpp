#pragma once

// Shared test helpers: hand-rolled reference computations that library
// results are checked against. These deliberately re-derive everything from
// the definitions with naive scans instead of calling back into the library's
// incremental code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "napsched/oa_planner.hpp"
#include "napsched/workload.hpp"

namespace testsupport {

inline napsched::Job job(std::int64_t id, double r, double d, double w, double v) {
    return napsched::Job{id, r, d, w, v};
}

inline napsched::PowerModel model(double alpha, double beta, double gamma) {
    napsched::PowerModel m;
    m.alpha = alpha;
    m.beta = beta;
    m.gamma = gamma;
    return m;
}

struct RefSegment {
    double end = 0.0;
    double density = 0.0;
};

/// Exhaustive reference for the planner: per round, scan every remaining
/// deadline tau, recompute (total remaining work due by tau) / (tau - base)
/// from scratch, keep the maximum, then take the latest tau whose density is
/// within 1e-9 of it. No prefix caching, no incremental state across rounds.
inline std::vector<RefSegment> reference_plan(double t, std::vector<napsched::PendingJob> jobs) {
    std::sort(jobs.begin(), jobs.end(), [](const napsched::PendingJob& a,
                                           const napsched::PendingJob& b) {
        return a.deadline != b.deadline ? a.deadline < b.deadline : a.id < b.id;
    });
    std::vector<RefSegment> out;
    double base = t;
    while (!jobs.empty()) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            if (k + 1 < jobs.size() && jobs[k + 1].deadline == jobs[k].deadline) continue;
            double work = 0.0;
            for (std::size_t i = 0; i <= k; ++i) work += jobs[i].remaining_work;
            best = std::max(best, work / (jobs[k].deadline - base));
        }
        std::size_t chosen = 0;
        double chosen_density = 0.0;
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            if (k + 1 < jobs.size() && jobs[k + 1].deadline == jobs[k].deadline) continue;
            double work = 0.0;
            for (std::size_t i = 0; i <= k; ++i) work += jobs[i].remaining_work;
            const double density = work / (jobs[k].deadline - base);
            if (density >= best - 1e-9) {
                chosen = k;
                chosen_density = density;
            }
        }
        out.push_back({jobs[chosen].deadline, chosen_density});
        base = jobs[chosen].deadline;
        jobs.erase(jobs.begin(), jobs.begin() + static_cast<std::ptrdiff_t>(chosen) + 1);
    }
    return out;
}

/// Reference for the minimum total dynamic energy (integral of speed^alpha)
/// over schedules meeting every window: grid search over piecewise-constant
/// speeds on breakpoint cells, refined around the best feasible point.
/// Feasibility is the interval-capacity condition: for every breakpoint pair
/// (lo, hi), capacity inside must cover the work of jobs windowed inside.
/// Converges to a few percent; intended for n <= 3.
inline double reference_min_dynamic_energy(const std::vector<napsched::Job>& jobs_in,
                                           double alpha) {
    std::vector<napsched::Job> jobs;
    for (const napsched::Job& j : jobs_in)
        if (j.work > 0.0) jobs.push_back(j);
    if (jobs.empty()) return 0.0;

    std::vector<double> pts;
    for (const napsched::Job& j : jobs) {
        pts.push_back(j.release);
        pts.push_back(j.deadline);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t cells = pts.size() - 1;

    struct Constraint {
        std::size_t first = 0, last = 0;  // inclusive cell range
        double work = 0.0;
    };
    std::vector<Constraint> constraints;
    double smax = 0.0;
    for (std::size_t a = 0; a + 1 < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            double work = 0.0;
            for (const napsched::Job& j : jobs)
                if (j.release >= pts[a] && j.deadline <= pts[b]) work += j.work;
            if (work <= 0.0) continue;
            constraints.push_back({a, b - 1, work});
            smax = std::max(smax, work / (pts[b] - pts[a]));
        }
    }

    std::vector<double> len(cells);
    for (std::size_t c = 0; c < cells; ++c) len[c] = pts[c + 1] - pts[c];

    std::vector<double> lo(cells, 0.0), hi(cells, smax);
    std::vector<double> speeds(cells, 0.0), best_speeds(cells, smax);
    double best_energy = std::numeric_limits<double>::infinity();
    constexpr int kPoints = 9;
    for (int level = 0; level < 5; ++level) {
        std::vector<int> idx(cells, 0);
        for (;;) {
            for (std::size_t c = 0; c < cells; ++c)
                speeds[c] = lo[c] + (hi[c] - lo[c]) * idx[c] / (kPoints - 1);
            bool feasible = true;
            for (const Constraint& con : constraints) {
                double cap = 0.0;
                for (std::size_t c = con.first; c <= con.last; ++c) cap += speeds[c] * len[c];
                if (cap < con.work - 1e-9) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                double energy = 0.0;
                for (std::size_t c = 0; c < cells; ++c)
                    energy += std::pow(speeds[c], alpha) * len[c];
                if (energy < best_energy) {
                    best_energy = energy;
                    best_speeds = speeds;
                }
            }
            std::size_t c = 0;
            while (c < cells && ++idx[c] == kPoints) idx[c++] = 0;
            if (c == cells) break;
        }
        for (std::size_t c = 0; c < cells; ++c) {
            const double span = (hi[c] - lo[c]) / (kPoints - 1);
            lo[c] = std::max(0.0, best_speeds[c] - span);
            hi[c] = best_speeds[c] + span;
        }
    }
    return best_energy;
}

}  // namespace testsupport
