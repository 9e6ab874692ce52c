#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "napsched/oa_planner.hpp"
#include "napsched/workload.hpp"

namespace napsched {

enum class Mode { Sleeping, Idling, Working };

const char* to_string(Mode mode);

/// @brief Everything a scheduler may look at when deciding on a newly
/// released job. Rejected jobs leave no mark here, so decisions can never
/// depend on past rejections.
struct ProcessorState {
    Mode mode = Mode::Sleeping;
    double clock = 0.0;
    /// Cost of the idle period the processor is already committed to if it
    /// accepts nothing: 0 while working, beta times elapsed idle time while
    /// idling, gamma while sleeping. Always within [0, gamma].
    double idle_cost = 0.0;
    /// Remaining accepted work, ordered by (deadline, id).
    std::vector<PendingJob> pending{};

    /// @brief Order-sensitive FNV-1a fingerprint of the full state.
    std::uint64_t digest() const;
};

enum class RejectReason {
    density_too_low,
    value_below_idle_cost,
    oa_speed_exceeds_profitable,
    oa_speed_exceeds_cap,
    accepted,
};

const char* to_string(RejectReason reason);

struct Decision {
    bool accept = false;
    RejectReason reason = RejectReason::accepted;

    static Decision make_accept() { return {true, RejectReason::accepted}; }
    static Decision make_reject(RejectReason why) { return {false, why}; }
};

/// @brief Admission policy interface. The engine owns all scheduling (EDF
/// order, speeds, sleep transitions); policies only accept or reject each job
/// at its release instant, as a pure function of the visible state.
class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual Decision decide(const PowerModel& model, const ProcessorState& state,
                            const Job& job) const = 0;
    virtual std::string name() const = 0;
};

struct TraceSegment {
    double t0 = 0.0;
    double t1 = 0.0;
    Mode mode = Mode::Sleeping;
    double speed = 0.0;                     ///< > 0 only in Working segments
    std::optional<std::int64_t> job_id{};   ///< set only in Working segments
};

/// @brief One recorded admission decision: the job, the verdict, and the
/// exact state the scheduler saw (replaying it must reproduce the verdict).
struct DecisionRecord {
    Job job{};
    Decision decision{};
    ProcessorState state{};
};

struct Trace {
    std::vector<TraceSegment> segments{};  ///< contiguous partition of [0, horizon]
    std::vector<double> wake_events{};     ///< sleep-to-awake instants
    std::vector<DecisionRecord> decisions{};
    std::vector<std::string> findings{};   ///< soft invariant violations (speed cap)
    double horizon = 0.0;
};

struct CostBreakdown {
    double e_sleep = 0.0;  ///< gamma per wake event
    double e_idle = 0.0;   ///< static power integrated over idle time
    double e_work = 0.0;   ///< power integrated over working segments
    double v_rej = 0.0;    ///< value forfeited by rejections
    double total = 0.0;    ///< e_sleep + e_idle + e_work + v_rej
    double e_sys = 0.0;    ///< static share of all awake time; <= e_idle + e_work
};

struct EngineOptions {
    /// Sleep as soon as the pending set drains instead of idling out the
    /// gamma/beta timeout. Offline schedule builders use this; the online
    /// engine must hedge and keeps it off.
    bool sleep_immediately = false;
};

struct SimulationResult {
    Trace trace;
    CostBreakdown costs;
};

/// @brief Event-driven simulation of one scheduler over one instance.
///
/// The processor starts asleep at time 0. Arrivals are decided in (release,
/// id) order against the pre-transition state; while working it runs EDF at
/// speed max(planned density, critical speed); idling turns into sleeping
/// once the idle cost reaches gamma; idling or sleeping turns into working as
/// soon as the planned density of pending work reaches the critical speed.
/// The trace ends once the processor is back asleep with nothing pending (or
/// idle forever when beta = 0).
/// @throws std::invalid_argument when validate(inst) reports violations.
/// @throws std::logic_error when an accepted job cannot meet its deadline.
SimulationResult simulate(const Instance& inst, const Scheduler& scheduler,
                          const EngineOptions& opts = {});

/// @brief Recompute the cost breakdown from a trace alone; equals the
/// breakdown simulate() returned to 1e-9 relative.
/// @throws std::invalid_argument on overlapping or out-of-order segments.
CostBreakdown cost(const Trace& trace, const PowerModel& model);

/// @brief Check a trace against its instance: every accepted job is processed
/// to at least work*(1 - 1e-6) inside [release, deadline + 1e-9], and work
/// runs only on accepted jobs. Violations are returned, not thrown.
std::vector<std::string> feasibility_check(const Trace& trace, const Instance& inst);

/// @brief CSV export with columns t0,t1,mode,speed,job_id (shortest
/// round-trip number formatting, empty job_id outside working segments).
void write_trace_csv(const Trace& trace, std::ostream& out);

/// @brief JSON object with e_sleep, e_idle, e_work, v_rej, total, e_sys.
std::string cost_json(const CostBreakdown& costs);

}  // namespace napsched
