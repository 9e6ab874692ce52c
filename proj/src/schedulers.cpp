#include "napsched/schedulers.hpp"

#include <cmath>
#include <stdexcept>

namespace napsched {

namespace {
constexpr double kTol = 1e-9;  // threshold comparisons lean toward acceptance on ties
}

SchedulerParams SchedulerParams::defaults(const PowerModel& model) {
    if (!(model.alpha >= 2.0))
        throw std::invalid_argument("scheduler defaults require alpha >= 2");
    SchedulerParams p;
    p.c2 = std::pow(model.alpha, (model.alpha - 2.0) / (model.alpha - 1.0));
    p.b = (model.alpha + 1.0) / p.c2;
    p.c1 = 4.0 / (1.0 + std::pow(p.b, model.alpha - 1.0));
    return p;
}

void SchedulerParams::validate() const {
    if (!(c1 > 0.0)) throw std::invalid_argument("scheduler params: c1 must be > 0");
    if (!(c2 > 0.0)) throw std::invalid_argument("scheduler params: c2 must be > 0");
    if (!(b >= 1.0 / c2)) throw std::invalid_argument("scheduler params: b must be >= 1/c2");
}

double SchedulerParams::density_floor(const PowerModel& model) const {
    const double s_cr = critical_speed(model);
    return std::pow(s_cr, model.alpha - 1.0) /
           (model.alpha * std::pow(c2, model.alpha - 1.0));
}

AlgorithmA::AlgorithmA(SchedulerParams params, bool bounded)
    : params_(params), bounded_(bounded) {
    params_.validate();
}

Decision AlgorithmA::decide(const PowerModel& model, const ProcessorState& state,
                            const Job& job) const {
    return decide_with_idle_cost(model, state, job, state.idle_cost);
}

Decision AlgorithmA::decide_with_idle_cost(const PowerModel& model, const ProcessorState& state,
                                           const Job& job, double idle_cost) const {
    if (job.work == 0.0) return Decision::make_accept();
    const double density = value_density(job);
    if (density < params_.density_floor(model) - kTol)
        return Decision::make_reject(RejectReason::density_too_low);
    if (job.value < params_.c1 * idle_cost - kTol)
        return Decision::make_reject(RejectReason::value_below_idle_cost);
    const double s_oa = hypothetical_speed(state.clock, state.pending,
                                           PendingJob{job.id, job.deadline, job.work});
    const double s_up = profitable_speed(model, job);
    if (s_oa > params_.c2 * s_up + kTol)
        return Decision::make_reject(RejectReason::oa_speed_exceeds_profitable);
    if (bounded_) {
        if (!model.max_speed)
            throw std::invalid_argument("bounded admission requires a max_speed in the model");
        if (s_oa > *model.max_speed + kTol)
            return Decision::make_reject(RejectReason::oa_speed_exceeds_cap);
    }
    return Decision::make_accept();
}

std::string AlgorithmA::name() const { return bounded_ ? "A_T" : "A"; }

Decision RejectAll::decide(const PowerModel&, const ProcessorState&, const Job&) const {
    // Rejections carry a reason; the value test is the generic no-merit one.
    return Decision::make_reject(RejectReason::value_below_idle_cost);
}

Decision AcceptAll::decide(const PowerModel& model, const ProcessorState& state,
                           const Job& job) const {
    // Unconditional acceptance, except that a speed cap is never knowingly
    // overrun: planning the job at a speed beyond the cap would be infeasible.
    if (model.max_speed && job.work > 0.0) {
        const double s_oa = hypothetical_speed(state.clock, state.pending,
                                               PendingJob{job.id, job.deadline, job.work});
        if (s_oa > *model.max_speed + kTol)
            return Decision::make_reject(RejectReason::oa_speed_exceeds_cap);
    }
    return Decision::make_accept();
}

Decision NoSleepA::decide(const PowerModel& model, const ProcessorState& state,
                          const Job& job) const {
    return decide_with_idle_cost(model, state, job, 0.0);
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, const PowerModel& model,
                                          const std::optional<SchedulerParams>& params) {
    const SchedulerParams p = params ? *params : SchedulerParams::defaults(model);
    if (name == "A") return std::make_unique<AlgorithmA>(p);
    if (name == "A_T") {
        if (!model.max_speed)
            throw std::invalid_argument("scheduler A_T requires the model to carry max_speed");
        return std::make_unique<AlgorithmA>(p, true);
    }
    if (name == "reject_all") return std::make_unique<RejectAll>();
    if (name == "accept_all") return std::make_unique<AcceptAll>();
    if (name == "no_sleep_A") return std::make_unique<NoSleepA>(p);
    throw std::invalid_argument("unknown scheduler: " + name +
                                " (expected A, A_T, reject_all, accept_all, no_sleep_A)");
}

}  // namespace napsched
