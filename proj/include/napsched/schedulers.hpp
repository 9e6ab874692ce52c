#pragma once

#include <memory>
#include <optional>
#include <string>

#include "napsched/sim_engine.hpp"

namespace napsched {

/// @brief Constants steering the admission rules. The defaults are the tuned
/// choice behind the library's headline competitive guarantee.
struct SchedulerParams {
    double c1 = 1.0;  ///< idle-cost multiplier in the value test, in (0, 1]
    double c2 = 1.0;  ///< slack factor on the profitable-speed test, > 0
    double b = 3.0;   ///< bound-side knob paired with c2; >= 1/c2, reports only

    /// Tuned defaults: c2 = alpha^((alpha-2)/(alpha-1)), b = (alpha+1)/c2,
    /// c1 = 4/(1+b^(alpha-1)) <= 1.
    static SchedulerParams defaults(const PowerModel& model);

    /// @throws std::invalid_argument when a field is out of range.
    void validate() const;

    /// Minimum admissible value density, s_cr^(alpha-1) / (alpha c2^(alpha-1)).
    double density_floor(const PowerModel& model) const;
};

/// @brief Profit-aware admission policy. A job is rejected when its value
/// density is below the density floor, when its value cannot pay for the idle
/// period already committed to, or when the plan would have to run it above
/// c2 times its profitable speed; with a speed cap, also when the plan speed
/// exceeds the cap. Conditions are evaluated in that order and short-circuit,
/// so the recorded reason is the first failing test.
class AlgorithmA : public Scheduler {
public:
    explicit AlgorithmA(SchedulerParams params, bool bounded = false);

    Decision decide(const PowerModel& model, const ProcessorState& state,
                    const Job& job) const override;
    std::string name() const override;

protected:
    /// Core rule with an explicit idle cost (no_sleep_A reuses it with 0).
    Decision decide_with_idle_cost(const PowerModel& model, const ProcessorState& state,
                                   const Job& job, double idle_cost) const;

private:
    SchedulerParams params_;
    bool bounded_;
};

/// @brief Rejects every job.
class RejectAll : public Scheduler {
public:
    Decision decide(const PowerModel&, const ProcessorState&, const Job&) const override;
    std::string name() const override { return "reject_all"; }
};

/// @brief Accepts everything it feasibly can: every job on unbounded models
/// (the engine's EDF dispatch at max(planned density, critical speed) meets
/// all deadlines), and on capped models every job whose planned speed stays
/// within the cap.
class AcceptAll : public Scheduler {
public:
    Decision decide(const PowerModel&, const ProcessorState&, const Job&) const override;
    std::string name() const override { return "accept_all"; }
};

/// @brief AlgorithmA with the idle cost blanked to zero: the value test never
/// fires, as if waking carried no price.
class NoSleepA : public AlgorithmA {
public:
    explicit NoSleepA(SchedulerParams params) : AlgorithmA(std::move(params)) {}
    Decision decide(const PowerModel& model, const ProcessorState& state,
                    const Job& job) const override;
    std::string name() const override { return "no_sleep_A"; }
};

/// @brief Factory for CLI/config names: A, A_T, reject_all, accept_all,
/// no_sleep_A. Params default to SchedulerParams::defaults(model).
/// @throws std::invalid_argument for unknown names or A_T without a cap.
std::unique_ptr<Scheduler> make_scheduler(const std::string& name, const PowerModel& model,
                                          const std::optional<SchedulerParams>& params = {});

}  // namespace napsched
