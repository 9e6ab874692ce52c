#include "napsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace napsched {

namespace {

struct Window {
    double r, d, w;
};

/// Accepts exactly a fixed id set; used to drive the engine as an offline
/// schedule builder for one enumerated subset.
class FixedSetScheduler : public Scheduler {
public:
    explicit FixedSetScheduler(std::unordered_set<std::int64_t> ids) : ids_(std::move(ids)) {}
    Decision decide(const PowerModel&, const ProcessorState&, const Job& job) const override {
        return ids_.count(job.id) ? Decision::make_accept()
                                  : Decision::make_reject(RejectReason::value_below_idle_cost);
    }
    std::string name() const override { return "fixed_set"; }

private:
    std::unordered_set<std::int64_t> ids_;
};

void require_small(const Instance& inst, const char* what) {
    if (inst.jobs.size() > static_cast<std::size_t>(kOracleJobLimit))
        throw OracleRefusal(std::string(what) + ": subset enumeration capped at " +
                            std::to_string(kOracleJobLimit) + " jobs, got " +
                            std::to_string(inst.jobs.size()));
}

}  // namespace

double yds_energy(std::vector<Job> in, double alpha) {
    std::vector<Window> jobs;
    jobs.reserve(in.size());
    for (const Job& j : in) {
        if (!(j.deadline > j.release))
            throw std::invalid_argument("yds_energy: job " + std::to_string(j.id) +
                                        " has an empty window");
        if (j.work < 0.0)
            throw std::invalid_argument("yds_energy: job " + std::to_string(j.id) +
                                        " has negative work");
        if (j.work > 0.0) jobs.push_back({j.release, j.deadline, j.work});
    }

    double energy = 0.0;
    while (!jobs.empty()) {
        double best_den = -1.0, lo = 0.0, hi = 0.0;
        for (const Window& a : jobs) {
            for (const Window& b : jobs) {
                if (!(b.d > a.r)) continue;
                double work = 0.0;
                for (const Window& j : jobs)
                    if (j.r >= a.r && j.d <= b.d) work += j.w;
                const double den = work / (b.d - a.r);
                if (den > best_den) {
                    best_den = den;
                    lo = a.r;
                    hi = b.d;
                }
            }
        }
        energy += std::pow(best_den, alpha) * (hi - lo);
        const double len = hi - lo;
        std::vector<Window> rest;
        rest.reserve(jobs.size());
        for (const Window& j : jobs) {
            if (j.r >= lo && j.d <= hi) continue;  // scheduled in this interval
            Window c = j;
            // Compress the consumed interval out of the timeline.
            c.r = j.r >= hi ? j.r - len : (j.r > lo ? lo : j.r);
            c.d = j.d >= hi ? j.d - len : (j.d > lo ? lo : j.d);
            rest.push_back(c);
        }
        jobs = std::move(rest);
    }
    return energy;
}

double lower_bound(const Instance& inst) {
    require_small(inst, "lower_bound");
    const PowerModel& m = inst.model;
    const double s_cr = critical_speed(m);
    const double per_work = s_cr > 0.0 ? per_work_cost(m, s_cr) : 0.0;
    const std::size_t n = inst.jobs.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<Job> accepted;
        double work_sum = 0.0, value_out = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                accepted.push_back(inst.jobs[i]);
                work_sum += inst.jobs[i].work;
            } else {
                value_out += inst.jobs[i].value;
            }
        }
        const double wake = mask != 0 ? m.gamma : 0.0;
        const double work_energy = std::max(yds_energy(accepted, m.alpha), work_sum * per_work);
        best = std::min(best, wake + work_energy + value_out);
    }
    return best;
}

UpperBound upper_bound(const Instance& inst) {
    require_small(inst, "upper_bound");
    if (auto violations = validate(inst); !violations.empty())
        throw std::invalid_argument("upper_bound: invalid instance: " + violations.front());
    const std::size_t n = inst.jobs.size();
    UpperBound best;
    best.cost = std::numeric_limits<double>::infinity();
    EngineOptions opts;
    opts.sleep_immediately = true;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::unordered_set<std::int64_t> ids;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) ids.insert(inst.jobs[i].id);
        FixedSetScheduler sched(std::move(ids));
        SimulationResult res = simulate(inst, sched, opts);
        if (res.costs.total < best.cost) {
            best.cost = res.costs.total;
            best.witness = std::move(res.trace);
            best.accepted.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) best.accepted.push_back(inst.jobs[i].id);
        }
    }
    return best;
}

Bracket bracket(const Instance& inst) {
    Bracket out;
    out.lower = lower_bound(inst);
    out.upper = upper_bound(inst).cost;
    out.certified = out.upper - out.lower <= 1e-6 * std::max(1.0, std::abs(out.upper));
    return out;
}

double cheap_lower_bound(const Instance& inst) {
    const double s_cr = critical_speed(inst.model);
    const double per_work = s_cr > 0.0 ? per_work_cost(inst.model, s_cr) : 0.0;
    double sum = 0.0;
    for (const Job& j : inst.jobs) sum += std::min(j.value, j.work * per_work);
    return sum;
}

}  // namespace napsched
