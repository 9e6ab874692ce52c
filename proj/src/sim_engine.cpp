#include "napsched/sim_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "internal_fmt.hpp"

namespace napsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSpeedTol = 1e-9;     // wake threshold: planned density >= s_cr - tol
constexpr double kSnapTol = 1e-9;      // completion times this close to an arrival coincide with it
constexpr double kDeadlineTol = 1e-9;  // completion-by-deadline slack

struct ActiveJob {
    Job job;
    double remaining = 0.0;
};

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        h ^= (word >> (8 * i)) & 0xFF;
        h *= 1099511628211ull;
    }
}

class Engine {
public:
    Engine(const Instance& inst, const Scheduler& scheduler, const EngineOptions& opts)
        : inst_(inst), model_(inst.model), scheduler_(scheduler), opts_(opts),
          s_cr_(critical_speed(inst.model)) {}

    SimulationResult run() {
        if (auto violations = validate(inst_); !violations.empty()) {
            std::string msg = "simulate: invalid instance:";
            for (const auto& v : violations) msg += "\n  " + v;
            throw std::invalid_argument(msg);
        }
        const std::size_t budget = 40 * inst_.jobs.size() + 400;
        std::size_t steps = 0;
        while (true) {
            run_transitions();
            if (done()) break;
            const double t = next_event_time();
            advance_to(t);
            const bool arrived = process_arrivals();
            const bool completed = sweep_completions();
            if (mode_ == Mode::Working && (arrived || completed)) refresh_speed();
            if (++steps > budget)
                throw std::logic_error("simulate: event budget exceeded (engine bug)");
        }
        trace_.horizon = clock_;
        costs_.e_sys = model_.beta * awake_time_;
        costs_.total = costs_.e_sleep + costs_.e_idle + costs_.e_work + costs_.v_rej;
        return SimulationResult{std::move(trace_), costs_};
    }

private:
    // --- state ---------------------------------------------------------
    const Instance& inst_;
    const PowerModel& model_;
    const Scheduler& scheduler_;
    EngineOptions opts_;
    double s_cr_;

    Mode mode_ = Mode::Sleeping;
    double clock_ = 0.0;
    double idle_start_ = 0.0;
    double sleep_at_ = kInf;  // instant the idle timeout fires; exact, set on entering Idling
    double speed_ = 0.0;      // current working speed
    std::vector<ActiveJob> active_{};
    std::size_t next_arrival_ = 0;

    Trace trace_{};
    CostBreakdown costs_{};
    double awake_time_ = 0.0;

    // --- helpers -------------------------------------------------------
    static bool edf_before(const ActiveJob& a, const ActiveJob& b) {
        return a.job.deadline != b.job.deadline ? a.job.deadline < b.job.deadline
                                                : a.job.id < b.job.id;
    }

    ActiveJob& head() {
        return *std::min_element(active_.begin(), active_.end(), edf_before);
    }

    /// Work below this is completion dust: finished in the continuous
    /// dynamics, waiting only for the discrete sweep.
    double completion_threshold() const { return 2e-9 * speed_ + 1e-12; }

    std::vector<PendingJob> pending_snapshot() const {
        std::vector<PendingJob> out;
        out.reserve(active_.size());
        // Arrivals are decided before completions are swept, so a job can sit
        // in active_ with dust remaining at its own deadline instant; it is
        // not pending work and must not reach the planner (whose contract
        // requires deadlines strictly after the planning instant).
        const double dust = mode_ == Mode::Working ? completion_threshold() : -1.0;
        for (const ActiveJob& a : active_) {
            if (a.remaining <= dust) continue;
            out.push_back({a.job.id, a.job.deadline, a.remaining});
        }
        std::sort(out.begin(), out.end(), [](const PendingJob& a, const PendingJob& b) {
            return a.deadline != b.deadline ? a.deadline < b.deadline : a.id < b.id;
        });
        return out;
    }

    double idle_cost_now() const {
        switch (mode_) {
            case Mode::Working: return 0.0;
            case Mode::Sleeping: return model_.gamma;
            case Mode::Idling:
                return std::min(model_.gamma, model_.beta * (clock_ - idle_start_));
        }
        return 0.0;
    }

    double planned_density() const {
        return plan(clock_, pending_snapshot()).initial_speed();
    }

    void refresh_speed() {
        speed_ = std::max(plan(clock_, pending_snapshot()).initial_speed(), s_cr_);
        if (model_.max_speed && speed_ > *model_.max_speed + kSpeedTol) {
            std::ostringstream os;
            os << "speed " << speed_ << " exceeds cap " << *model_.max_speed << " at t=" << clock_;
            trace_.findings.push_back(os.str());
        }
    }

    double idle_timeout() const {
        if (opts_.sleep_immediately) return 0.0;
        if (model_.beta > 0.0) return model_.gamma / model_.beta;
        return kInf;
    }

    // Earliest instant the pending work's planned density reaches the
    // critical speed: min over deadlines d of d - W(d)/s_cr with W the
    // remaining work due by d. Only called when the density is still below.
    double wake_time() const {
        std::vector<PendingJob> pend = pending_snapshot();
        double best = kInf;
        double acc = 0.0;
        for (const PendingJob& p : pend) {
            acc += p.remaining_work;
            best = std::min(best, p.deadline - acc / s_cr_);
        }
        return std::max(best, clock_);
    }

    bool done() const {
        if (next_arrival_ < inst_.jobs.size() || !active_.empty()) return false;
        if (mode_ == Mode::Sleeping) return true;
        return mode_ == Mode::Idling && !std::isfinite(idle_timeout());
    }

    // --- mode machine ----------------------------------------------------
    void run_transitions() {
        for (;;) {
            if (mode_ == Mode::Working && active_.empty()) {
                mode_ = Mode::Idling;
                speed_ = 0.0;
                idle_start_ = clock_;
                sleep_at_ = std::isfinite(idle_timeout()) ? clock_ + idle_timeout() : kInf;
                continue;
            }
            if (mode_ == Mode::Idling) {
                // Wake-to-work checked before the sleep timeout so a tie never
                // pays a spurious wake-up on the way back.
                if (!active_.empty() && planned_density() >= s_cr_ - kSpeedTol) {
                    mode_ = Mode::Working;
                    refresh_speed();
                    continue;
                }
                if (clock_ >= sleep_at_) {
                    mode_ = Mode::Sleeping;
                    continue;
                }
            }
            if (mode_ == Mode::Sleeping && !active_.empty() &&
                planned_density() >= s_cr_ - kSpeedTol) {
                costs_.e_sleep += model_.gamma;
                trace_.wake_events.push_back(clock_);
                mode_ = Mode::Working;
                refresh_speed();
                continue;
            }
            break;
        }
    }

    // --- events ----------------------------------------------------------
    double next_event_time() {
        const double arrival =
            next_arrival_ < inst_.jobs.size() ? inst_.jobs[next_arrival_].release : kInf;
        double t = arrival;
        if (mode_ == Mode::Working) {
            double completion = clock_ + head().remaining / speed_;
            // Abutting windows: a completion landing within fp noise of the
            // next arrival is the same instant; arrivals are authoritative.
            if (std::isfinite(arrival) && std::abs(completion - arrival) <= kSnapTol)
                completion = arrival;
            t = std::min(t, completion);
        } else {
            if (mode_ == Mode::Idling) t = std::min(t, sleep_at_);
            if (!active_.empty()) t = std::min(t, wake_time());
        }
        if (!std::isfinite(t)) throw std::logic_error("simulate: no next event (engine bug)");
        return t;
    }

    void emit(double t1, Mode mode, double speed, std::optional<std::int64_t> job_id) {
        if (!(t1 > clock_)) return;
        if (!trace_.segments.empty()) {
            TraceSegment& last = trace_.segments.back();
            if (last.t1 == clock_ && last.mode == mode && last.speed == speed &&
                last.job_id == job_id) {
                last.t1 = t1;
                return;
            }
        }
        trace_.segments.push_back({clock_, t1, mode, speed, job_id});
    }

    void advance_to(double t) {
        if (t < clock_) throw std::logic_error("simulate: time went backwards (engine bug)");
        if (t == clock_) return;
        const double len = t - clock_;
        switch (mode_) {
            case Mode::Working: {
                ActiveJob& h = head();
                emit(t, Mode::Working, speed_, h.job.id);
                h.remaining = std::max(0.0, h.remaining - speed_ * len);
                costs_.e_work += power(model_, speed_) * len;
                awake_time_ += len;
                break;
            }
            case Mode::Idling:
                emit(t, Mode::Idling, 0.0, std::nullopt);
                costs_.e_idle += model_.beta * len;
                awake_time_ += len;
                break;
            case Mode::Sleeping:
                emit(t, Mode::Sleeping, 0.0, std::nullopt);
                break;
        }
        clock_ = t;
    }

    bool process_arrivals() {
        bool accepted_any = false;
        while (next_arrival_ < inst_.jobs.size() &&
               inst_.jobs[next_arrival_].release <= clock_) {
            const Job& job = inst_.jobs[next_arrival_];
            ProcessorState state{mode_, clock_, idle_cost_now(), pending_snapshot()};
            const Decision decision = scheduler_.decide(model_, state, job);
            trace_.decisions.push_back({job, decision, std::move(state)});
            if (decision.accept) {
                // Zero-work jobs complete instantly and never enter pending.
                if (job.work > 0.0) {
                    active_.push_back({job, job.work});
                    accepted_any = true;
                }
            } else {
                costs_.v_rej += job.value;
            }
            ++next_arrival_;
        }
        return accepted_any;
    }

    bool sweep_completions() {
        bool completed = false;
        while (mode_ == Mode::Working && !active_.empty()) {
            auto it = std::min_element(active_.begin(), active_.end(), edf_before);
            if (it->remaining > completion_threshold()) break;
            if (clock_ > it->job.deadline + kDeadlineTol) {
                std::ostringstream os;
                os << "simulate: job " << it->job.id << " completed at t=" << clock_
                   << " past its deadline " << it->job.deadline
                   << " (scheduler contract violation)";
                throw std::logic_error(os.str());
            }
            active_.erase(it);
            completed = true;
        }
        // A missed deadline with work left is the same contract violation.
        for (const ActiveJob& a : active_) {
            if (clock_ > a.job.deadline + kDeadlineTol) {
                std::ostringstream os;
                os << "simulate: job " << a.job.id << " unfinished at its deadline "
                   << a.job.deadline << " (scheduler contract violation)";
                throw std::logic_error(os.str());
            }
        }
        return completed;
    }
};

}  // namespace

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::Sleeping: return "sleep";
        case Mode::Idling: return "idle";
        case Mode::Working: return "work";
    }
    return "?";
}

const char* to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::density_too_low: return "density_too_low";
        case RejectReason::value_below_idle_cost: return "value_below_idle_cost";
        case RejectReason::oa_speed_exceeds_profitable: return "oa_speed_exceeds_profitable";
        case RejectReason::oa_speed_exceeds_cap: return "oa_speed_exceeds_cap";
        case RejectReason::accepted: return "accepted";
    }
    return "?";
}

std::uint64_t ProcessorState::digest() const {
    std::uint64_t h = 14695981039346656037ull;
    fnv_mix(h, static_cast<std::uint64_t>(mode));
    fnv_mix(h, std::bit_cast<std::uint64_t>(clock));
    fnv_mix(h, std::bit_cast<std::uint64_t>(idle_cost));
    for (const PendingJob& p : pending) {
        fnv_mix(h, static_cast<std::uint64_t>(p.id));
        fnv_mix(h, std::bit_cast<std::uint64_t>(p.deadline));
        fnv_mix(h, std::bit_cast<std::uint64_t>(p.remaining_work));
    }
    return h;
}

SimulationResult simulate(const Instance& inst, const Scheduler& scheduler,
                          const EngineOptions& opts) {
    return Engine(inst, scheduler, opts).run();
}

CostBreakdown cost(const Trace& trace, const PowerModel& model) {
    CostBreakdown out;
    double awake = 0.0;
    double prev_end = 0.0;
    for (const TraceSegment& s : trace.segments) {
        if (s.t1 < s.t0) throw std::invalid_argument("cost: segment with negative length");
        if (std::abs(s.t0 - prev_end) > 1e-9)
            throw std::invalid_argument("cost: segments overlap or leave a gap");
        const double len = s.t1 - s.t0;
        switch (s.mode) {
            case Mode::Working:
                out.e_work += power(model, s.speed) * len;
                awake += len;
                break;
            case Mode::Idling:
                out.e_idle += model.beta * len;
                awake += len;
                break;
            case Mode::Sleeping:
                break;
        }
        prev_end = s.t1;
    }
    out.e_sleep = model.gamma * static_cast<double>(trace.wake_events.size());
    for (const DecisionRecord& d : trace.decisions)
        if (!d.decision.accept) out.v_rej += d.job.value;
    out.e_sys = model.beta * awake;
    out.total = out.e_sleep + out.e_idle + out.e_work + out.v_rej;
    return out;
}

std::vector<std::string> feasibility_check(const Trace& trace, const Instance& inst) {
    std::vector<std::string> violations;
    std::unordered_map<std::int64_t, const Job*> accepted;
    std::unordered_map<std::int64_t, const Job*> known;
    for (const Job& j : inst.jobs) known[j.id] = &j;
    for (const DecisionRecord& d : trace.decisions)
        if (d.decision.accept) accepted[d.job.id] = known.count(d.job.id) ? known[d.job.id] : nullptr;

    std::unordered_map<std::int64_t, double> processed;
    std::unordered_map<std::int64_t, double> last_end;
    for (const TraceSegment& s : trace.segments) {
        if (s.mode != Mode::Working) continue;
        if (!s.job_id) {
            violations.push_back("working segment without a job id");
            continue;
        }
        const auto it = accepted.find(*s.job_id);
        if (it == accepted.end() || !it->second) {
            violations.push_back("work on job " + std::to_string(*s.job_id) +
                                 " that was never accepted");
            continue;
        }
        const Job& j = *it->second;
        if (s.t0 < j.release - 1e-9 || s.t1 > j.deadline + 1e-9)
            violations.push_back("job " + std::to_string(j.id) + " runs outside its window");
        processed[j.id] += (s.t1 - s.t0) * s.speed;
        last_end[j.id] = std::max(last_end[j.id], s.t1);
    }
    for (const auto& [id, jobptr] : accepted) {
        if (!jobptr) {
            violations.push_back("decision for unknown job " + std::to_string(id));
            continue;
        }
        const Job& j = *jobptr;
        const double got = processed.count(id) ? processed[id] : 0.0;
        if (got < j.work * (1.0 - 1e-6))
            violations.push_back("job " + std::to_string(id) + " underprocessed: " +
                                 detail::format_double(got) + " of " +
                                 detail::format_double(j.work));
        if (processed.count(id) && last_end[id] > j.deadline + 1e-9)
            violations.push_back("job " + std::to_string(id) + " finishes past its deadline");
    }
    return violations;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << "t0,t1,mode,speed,job_id\n";
    for (const TraceSegment& s : trace.segments) {
        out << detail::format_double(s.t0) << ',' << detail::format_double(s.t1) << ','
            << to_string(s.mode) << ',' << detail::format_double(s.speed) << ',';
        if (s.job_id) out << *s.job_id;
        out << '\n';
    }
}

std::string cost_json(const CostBreakdown& costs) {
    nlohmann::ordered_json doc;
    doc["e_sleep"] = costs.e_sleep;
    doc["e_idle"] = costs.e_idle;
    doc["e_work"] = costs.e_work;
    doc["v_rej"] = costs.v_rej;
    doc["total"] = costs.total;
    doc["e_sys"] = costs.e_sys;
    return doc.dump(2) + "\n";
}

}  // namespace napsched
