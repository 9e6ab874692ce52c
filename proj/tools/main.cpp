#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "internal_fmt.hpp"
#include "napsched/bounds.hpp"
#include "napsched/schedulers.hpp"
#include "napsched/sim_engine.hpp"
#include "napsched/workload.hpp"

namespace {

using napsched::detail::format_double;

/// Write to a file, or to stdout when the path is "-".
void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

/// Turn a --params c1,c2 flag into full scheduler parameters. The bound-side
/// knob keeps the tuned shape b = (alpha+1)/c2 around the custom c2.
std::optional<napsched::SchedulerParams> params_from_flag(const std::vector<double>& raw,
                                                          const napsched::PowerModel& model) {
    if (raw.empty()) return std::nullopt;
    if (raw.size() != 2) throw std::runtime_error("--params expects exactly two values: c1,c2");
    napsched::SchedulerParams params = napsched::SchedulerParams::defaults(model);
    params.c1 = raw[0];
    params.c2 = raw[1];
    params.b = (model.alpha + 1.0) / params.c2;
    params.validate();
    return params;
}

int checked_int(std::int64_t n, const char* what) {
    if (n < 0 || n > std::numeric_limits<int>::max()) {
        throw std::runtime_error(std::string(what) + " out of range");
    }
    return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"napsched: deterministic simulation and certification of online "
                 "profit-oriented scheduling on a speed-scalable processor with a sleep state"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate an instance as JSON");
    std::string gen_kind = "random";
    gen->add_option("--kind", gen_kind, "Instance family")
        ->check(CLI::IsMember({"random", "adversarial"}))
        ->capture_default_str();
    double gen_alpha = 2.0, gen_beta = 1.0, gen_gamma = 2.0, gen_max_speed = 0.0;
    gen->add_option("--alpha", gen_alpha, "Dynamic-power exponent")->capture_default_str();
    gen->add_option("--beta", gen_beta, "Static power while awake")->capture_default_str();
    gen->add_option("--gamma", gen_gamma, "Wake-up energy")->capture_default_str();
    auto* gen_ms = gen->add_option("--max-speed", gen_max_speed, "Hard speed cap (absent: none)");
    std::int64_t gen_n = 8;
    std::uint64_t gen_seed = 0;
    gen->add_option("--n", gen_n, "Number of jobs")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Seed for --kind random")->capture_default_str();
    double gen_work = 0.1, gen_value = 1.9;
    gen->add_option("--work", gen_work, "Per-job work (adversarial)")->capture_default_str();
    gen->add_option("--value", gen_value, "Per-job value (adversarial)")->capture_default_str();
    napsched::RandomSpec gen_spec{};
    gen_spec.release_span = 1.0;
    gen_spec.window_min = 1.0;
    gen_spec.window_max = 4.0;
    gen_spec.work_min = 0.5;
    gen_spec.work_max = 1.5;
    gen_spec.value_min = 0.0;
    gen_spec.value_max = 5.0;
    gen->add_option("--release-span", gen_spec.release_span, "Releases drawn from [0, span]")
        ->capture_default_str();
    gen->add_option("--window-min", gen_spec.window_min)->capture_default_str();
    gen->add_option("--window-max", gen_spec.window_max)->capture_default_str();
    gen->add_option("--work-min", gen_spec.work_min)->capture_default_str();
    gen->add_option("--work-max", gen_spec.work_max)->capture_default_str();
    gen->add_option("--value-min", gen_spec.value_min)->capture_default_str();
    gen->add_option("--value-max", gen_spec.value_max)->capture_default_str();
    std::string gen_out = "-";
    gen->add_option("--out", gen_out, "Output path, - for stdout")->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one scheduler over one instance");
    std::string sim_in;
    sim->add_option("--in", sim_in, "Instance JSON path")->required();
    std::string sim_scheduler = "A";
    sim->add_option("--scheduler", sim_scheduler, "A, A_T, reject_all, accept_all, no_sleep_A")
        ->capture_default_str();
    std::vector<double> sim_params;
    sim->add_option("--params", sim_params, "Override c1,c2")->delimiter(',');
    std::string sim_trace, sim_costs = "-";
    sim->add_option("--trace", sim_trace, "Write the trace CSV here (- for stdout)");
    sim->add_option("--costs", sim_costs, "Write the cost JSON here")->capture_default_str();

    // bench-adversarial
    auto* bench = app.add_subcommand("bench-adversarial",
                                     "Sweep the lower-bound family and report cost ratios");
    double b_alpha = 2.0, b_beta = 1.0, b_gamma = 2.0, b_work = 0.1, b_value = 1.9;
    bench->add_option("--alpha", b_alpha)->capture_default_str();
    bench->add_option("--beta", b_beta)->capture_default_str();
    bench->add_option("--gamma", b_gamma)->capture_default_str();
    bench->add_option("--work", b_work, "Per-job work")->capture_default_str();
    bench->add_option("--value", b_value, "Per-job value")->capture_default_str();
    std::vector<std::int64_t> b_ns = {10, 100, 1000};
    bench->add_option("--n", b_ns, "Comma-separated family sizes")
        ->delimiter(',')
        ->capture_default_str();
    std::string b_scheduler = "A", b_out = "-";
    bench->add_option("--scheduler", b_scheduler)->capture_default_str();
    bench->add_option("--out", b_out, "Output CSV path, - for stdout")->capture_default_str();

    // certify
    auto* cert = app.add_subcommand("certify",
                                    "Check simulated costs against competitive certificates");
    std::vector<std::string> c_inputs;
    auto* c_in_opt = cert->add_option("--in", c_inputs, "Instance JSON paths");
    std::string c_suite;
    auto* c_suite_opt =
        cert->add_option("--suite", c_suite, "Built-in corpus")
            ->check(CLI::IsMember({"low-density", "high-density", "speed-capped"}));
    c_in_opt->excludes(c_suite_opt);
    int c_count = 100;
    std::uint64_t c_seed = 1;
    cert->add_option("--count", c_count, "Corpus size for --suite")->capture_default_str();
    cert->add_option("--seed", c_seed, "Corpus seed for --suite")->capture_default_str();
    std::string c_scheduler = "A";
    cert->add_option("--scheduler", c_scheduler)->capture_default_str();
    std::vector<double> c_params;
    cert->add_option("--params", c_params, "Override c1,c2")->delimiter(',');
    std::string c_bound = "auto";
    cert->add_option("--bound", c_bound, "Certificate selection")
        ->check(CLI::IsMember({"auto", "general", "speed_capped"}))
        ->capture_default_str();
    std::string c_out = "-";
    cert->add_option("--out", c_out, "Output CSV path, - for stdout")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            napsched::PowerModel model{gen_alpha, gen_beta, gen_gamma, {}};
            if (gen_ms->count() > 0) model.max_speed = gen_max_speed;
            napsched::Instance inst;
            if (gen_kind == "adversarial") {
                inst = napsched::gen_adversarial(model, checked_int(gen_n, "--n"), gen_work,
                                                 gen_value);
            } else {
                gen_spec.n = gen_n;
                inst = napsched::gen_random(gen_seed, model, gen_spec);
            }
            write_text(gen_out, napsched::serialize_instance(inst));
            return 0;
        }

        if (sim->parsed()) {
            std::vector<std::string> warnings;
            const napsched::Instance inst = napsched::read_instance(sim_in, &warnings);
            for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
            const auto params = params_from_flag(sim_params, inst.model);
            const auto scheduler = napsched::make_scheduler(sim_scheduler, inst.model, params);
            const napsched::SimulationResult result = napsched::simulate(inst, *scheduler);
            for (const std::string& f : result.trace.findings) {
                std::cerr << "finding: " << f << "\n";
            }
            if (!sim_trace.empty()) {
                std::ostringstream os;
                napsched::write_trace_csv(result.trace, os);
                write_text(sim_trace, os.str());
            }
            write_text(sim_costs, napsched::cost_json(result.costs));
            return 0;
        }

        if (bench->parsed()) {
            const napsched::PowerModel model{b_alpha, b_beta, b_gamma, {}};
            std::ostringstream os;
            os << "n,scheduler,cost,reject_all,accept_all,ratio,asymptote\n";
            for (const std::int64_t n64 : b_ns) {
                const int n = checked_int(n64, "--n");
                const napsched::Instance inst =
                    napsched::gen_adversarial(model, n, b_work, b_value);
                const napsched::AdversarialBenchmark mark =
                    napsched::adversarial_benchmark_cost(model, n, b_work, b_value);
                const auto scheduler = napsched::make_scheduler(b_scheduler, model, {});
                const napsched::SimulationResult result = napsched::simulate(inst, *scheduler);
                os << n << ',' << scheduler->name() << ','
                   << format_double(result.costs.total) << ',' << format_double(mark.reject_all)
                   << ',' << format_double(mark.accept_all) << ','
                   << format_double(result.costs.total / mark.accept_all) << ','
                   << format_double(mark.asymptote) << '\n';
            }
            write_text(b_out, os.str());
            return 0;
        }

        if (cert->parsed()) {
            napsched::Experiment exp;
            exp.scheduler = c_scheduler;
            exp.bound = c_bound;
            if (!c_suite.empty()) {
                if (c_suite == "low-density") {
                    exp.instances = napsched::corpus_low_density(c_count, c_seed);
                } else if (c_suite == "high-density") {
                    exp.instances = napsched::corpus_high_density(c_count, c_seed);
                } else {
                    exp.instances = napsched::corpus_speed_capped(c_count, c_seed);
                }
            } else if (!c_inputs.empty()) {
                for (const std::string& path : c_inputs) {
                    napsched::Instance inst = napsched::read_instance(path);
                    exp.instances.emplace_back(std::filesystem::path(path).stem().string(),
                                               std::move(inst));
                }
            } else {
                throw std::runtime_error("certify: provide --in files or --suite");
            }
            if (!c_params.empty() && !exp.instances.empty()) {
                exp.params = params_from_flag(c_params, exp.instances.front().second.model);
            }
            const std::vector<napsched::BoundRow> rows = napsched::run_experiment(exp);
            std::ostringstream os;
            napsched::write_report_csv(rows, os);
            write_text(c_out, os.str());
            return napsched::all_pass(rows) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
