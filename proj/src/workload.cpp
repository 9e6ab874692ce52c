#include "napsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace napsched {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string describe(const Job& j) {
    std::ostringstream os;
    os << "job " << j.id;
    return os.str();
}

}  // namespace

std::vector<std::string> validate(const Instance& inst) {
    std::vector<std::string> violations;
    try {
        inst.model.validate();
    } catch (const std::invalid_argument& e) {
        violations.emplace_back(e.what());
    }
    std::unordered_set<std::int64_t> seen;
    const Job* prev = nullptr;
    for (const Job& j : inst.jobs) {
        if (!seen.insert(j.id).second) violations.push_back(describe(j) + ": duplicate id");
        if (!(j.release < j.deadline)) violations.push_back(describe(j) + ": empty window");
        if (j.work < 0.0) violations.push_back(describe(j) + ": negative work");
        if (j.value < 0.0) violations.push_back(describe(j) + ": negative value");
        if (!std::isfinite(j.release) || !std::isfinite(j.deadline) || !std::isfinite(j.work) ||
            !std::isfinite(j.value))
            violations.push_back(describe(j) + ": non-finite field");
        if (prev && (j.release < prev->release ||
                     (j.release == prev->release && j.id < prev->id)))
            violations.push_back(describe(j) + ": out of (release, id) order");
        prev = &j;
    }
    return violations;
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }

void RandomSpec::validate() const {
    if (n < 0) throw std::invalid_argument("random spec: n must be >= 0");
    if (!(release_span >= 0.0)) throw std::invalid_argument("random spec: release span must be >= 0");
    if (!(window_min > 0.0) || !(window_max >= window_min))
        throw std::invalid_argument("random spec: window range must satisfy 0 < min <= max");
    if (!(work_min > 0.0) || !(work_max >= work_min))
        throw std::invalid_argument("random spec: work range must satisfy 0 < min <= max");
    if (!(value_min >= 0.0) || !(value_max >= value_min))
        throw std::invalid_argument("random spec: value range must satisfy 0 <= min <= max");
}

Instance gen_random(std::uint64_t seed, const PowerModel& model, const RandomSpec& spec) {
    model.validate();
    spec.validate();
    SplitMix64 rng(seed);
    Instance inst{model, {}};
    inst.jobs.reserve(static_cast<std::size_t>(spec.n));
    for (std::int64_t i = 0; i < spec.n; ++i) {
        Job j;
        j.id = i;
        j.release = rng.next_in(0.0, spec.release_span);
        j.deadline = j.release + rng.next_in(spec.window_min, spec.window_max);
        j.work = rng.next_in(spec.work_min, spec.work_max);
        j.value = rng.next_in(spec.value_min, spec.value_max);
        inst.jobs.push_back(j);
    }
    std::sort(inst.jobs.begin(), inst.jobs.end(), [](const Job& a, const Job& b) {
        return a.release != b.release ? a.release < b.release : a.id < b.id;
    });
    return inst;
}

Instance gen_adversarial(const PowerModel& model, int n, double work, double value) {
    model.validate();
    const double s_cr = critical_speed(model);
    if (s_cr == 0.0)
        throw std::invalid_argument("adversarial family undefined for beta=0 (critical speed 0)");
    if (n < 1) throw std::invalid_argument("adversarial family: n must be >= 1");
    if (!(work > 0.0)) throw std::invalid_argument("adversarial family: work must be > 0");
    if (!(value > 0.0)) throw std::invalid_argument("adversarial family: value must be > 0");
    const double len = work / s_cr;
    Instance inst{model, {}};
    inst.jobs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // r_i = i*len (not accumulated) so consecutive windows abut bit-exactly.
        inst.jobs.push_back(Job{i, i * len, (i + 1) * len, work, value});
    }
    return inst;
}

AdversarialBenchmark adversarial_benchmark_cost(const PowerModel& model, int n, double work,
                                                double value) {
    const double s_cr = critical_speed(model);
    if (s_cr == 0.0)
        throw std::invalid_argument("adversarial family undefined for beta=0 (critical speed 0)");
    if (n < 1) throw std::invalid_argument("adversarial family: n must be >= 1");
    AdversarialBenchmark out;
    out.reject_all = n * value;
    out.accept_all = model.gamma + n * work * per_work_cost(model, s_cr);
    out.ratio = out.reject_all / out.accept_all;
    out.asymptote = (value / work) * s_cr / power(model, s_cr);
    return out;
}

double max_value_density(const Instance& inst, std::optional<double> value_cap) {
    double best = 0.0;
    for (const Job& j : inst.jobs) {
        if (value_cap && !(j.value < *value_cap)) continue;
        best = std::max(best, value_density(j));
    }
    return best;
}

namespace {

double require_number(const ordered_json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw std::runtime_error("instance parse error: missing field '" + std::string(field) +
                                 "' in " + where);
    if (!it->is_number())
        throw std::runtime_error("instance parse error: field '" + std::string(field) + "' in " +
                                 where + " is not a number");
    return it->get<double>();
}

void warn_unknown(const ordered_json& obj, std::initializer_list<const char*> known,
                  const std::string& where, std::vector<std::string>* warnings) {
    if (!warnings) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) found = true;
        if (!found) warnings->push_back("unknown field '" + it.key() + "' in " + where + " ignored");
    }
}

}  // namespace

Instance parse_instance(const std::string& json_text, std::vector<std::string>* warnings) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        throw std::runtime_error(std::string("instance parse error: ") + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("instance parse error: top level is not an object");

    Instance inst;
    inst.model.alpha = require_number(doc, "alpha", "instance");
    inst.model.beta = require_number(doc, "beta", "instance");
    inst.model.gamma = require_number(doc, "gamma", "instance");
    if (auto it = doc.find("max_speed"); it != doc.end() && !it->is_null()) {
        if (!it->is_number())
            throw std::runtime_error("instance parse error: field 'max_speed' is not a number or null");
        inst.model.max_speed = it->get<double>();
    }
    warn_unknown(doc, {"alpha", "beta", "gamma", "max_speed", "jobs"}, "instance", warnings);

    auto jobs_it = doc.find("jobs");
    if (jobs_it == doc.end())
        throw std::runtime_error("instance parse error: missing field 'jobs' in instance");
    if (!jobs_it->is_array())
        throw std::runtime_error("instance parse error: field 'jobs' is not an array");
    for (std::size_t k = 0; k < jobs_it->size(); ++k) {
        const ordered_json& jo = (*jobs_it)[k];
        const std::string where = "jobs[" + std::to_string(k) + "]";
        if (!jo.is_object())
            throw std::runtime_error("instance parse error: " + where + " is not an object");
        auto id_it = jo.find("id");
        if (id_it == jo.end())
            throw std::runtime_error("instance parse error: missing field 'id' in " + where);
        if (!id_it->is_number_integer())
            throw std::runtime_error("instance parse error: field 'id' in " + where +
                                     " is not an integer");
        Job j;
        j.id = id_it->get<std::int64_t>();
        j.release = require_number(jo, "r", where);
        j.deadline = require_number(jo, "d", where);
        j.work = require_number(jo, "w", where);
        j.value = require_number(jo, "v", where);
        warn_unknown(jo, {"id", "r", "d", "w", "v"}, where, warnings);
        inst.jobs.push_back(j);
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    ordered_json doc;
    doc["alpha"] = inst.model.alpha;
    doc["beta"] = inst.model.beta;
    doc["gamma"] = inst.model.gamma;
    if (inst.model.max_speed)
        doc["max_speed"] = *inst.model.max_speed;
    else
        doc["max_speed"] = nullptr;
    doc["jobs"] = ordered_json::array();
    for (const Job& j : inst.jobs) {
        ordered_json jo;
        jo["id"] = j.id;
        jo["r"] = j.release;
        jo["d"] = j.deadline;
        jo["w"] = j.work;
        jo["v"] = j.value;
        doc["jobs"].push_back(std::move(jo));
    }
    return doc.dump(2) + "\n";
}

Instance read_instance(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_instance(buf.str(), warnings);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << serialize_instance(inst);
}

}  // namespace napsched
