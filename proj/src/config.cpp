#include "cacwb/config.hpp"

#include <fstream>
#include <set>

#include "cacwb/errors.hpp"

namespace cacwb {

using nlohmann::json;

namespace {

// Tracks which keys of an object were consumed; leftovers are errors.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
    }

    bool has(const std::string& key) {
        if (j_.contains(key)) {
            seen_.insert(key);
            return true;
        }
        return false;
    }

    const json& get(const std::string& key) {
        if (!has(key)) throw ValidationError(path_ + ": missing required key '" + key + "'");
        return j_.at(key);
    }

    template <typename T>
    T require(const std::string& key) {
        return convert<T>(get(key), key);
    }

    template <typename T>
    std::optional<T> maybe(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return convert<T>(j_.at(key), key);
    }

    template <typename T>
    T value_or(const std::string& key, T fallback) {
        auto v = maybe<T>(key);
        return v ? *v : fallback;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.contains(it.key())) {
                throw ValidationError(path_ + ": unknown key '" + it.key() + "'");
            }
        }
    }

    const std::string& path() const { return path_; }

private:
    template <typename T>
    T convert(const json& v, const std::string& key) {
        try {
            return v.get<T>();
        } catch (const json::exception&) {
            throw ValidationError(path_ + "." + key + ": wrong type");
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

PolicySpec parse_policy(const json& j) {
    ObjectReader r(j, "policy");
    const auto scheme = r.require<std::string>("scheme");
    PolicySpec spec;
    if (scheme == "nps") {
        spec = Nps{r.require<int>("C"), r.value_or<int>("classes", 2)};
    } else if (scheme == "fgb") {
        spec = Fgb{r.require<int>("C"), r.require<int>("M")};
    } else if (scheme == "fgc") {
        Fgc fgc;
        fgc.channels = r.require<int>("C");
        if (r.has("alphas")) {
            fgc.alphas = r.require<std::vector<double>>("alphas");
        } else {
            // Default ramp: alpha_i = 1 - i/C.
            fgc.alphas.resize(fgc.channels + 1);
            for (int i = 0; i <= fgc.channels; ++i) {
                fgc.alphas[i] = 1.0 - static_cast<double>(i) / fgc.channels;
            }
        }
        spec = std::move(fgc);
    } else if (scheme == "lfc") {
        spec = Lfc{r.require<int>("C"), r.require<int>("M"), r.require<double>("alpha")};
    } else if (scheme == "ufc") {
        spec = Ufc{r.require<int>("C"), r.require<double>("alpha")};
    } else if (scheme == "ufb") {
        spec = Ufb{r.require<int>("C"), r.require<int>("M"), r.require<int>("N"),
                   r.require<double>("alpha")};
    } else if (scheme == "multi-fgb") {
        spec = MultiFgb{r.require<std::vector<int>>("thresholds")};
    } else if (scheme == "ubt") {
        spec = Ubt{r.require<std::vector<int>>("thresholds"),
                   r.require<std::vector<double>>("alphas")};
    } else {
        throw ValidationError("policy.scheme: unknown scheme '" + scheme + "'");
    }
    r.finish();
    validate(spec);
    return spec;
}

SweepRange parse_sweep(const json& j) {
    ObjectReader r(j, "traffic.sweep");
    SweepRange range;
    range.min = r.require<double>("min");
    range.max = r.require<double>("max");
    range.step = r.require<double>("step");
    r.finish();
    if (!(range.step > 0.0)) throw ValidationError("traffic.sweep.step: must be > 0");
    if (!(range.min <= range.max)) {
        throw ValidationError("traffic.sweep: min must be <= max");
    }
    return range;
}

HandoverSpec parse_handover(const json& j) {
    ObjectReader r(j, "traffic.handover");
    HandoverSpec spec;
    const auto mode = r.require<std::string>("mode");
    if (mode == "fixed-ratio") {
        spec.mode = HandoverMode::FixedRatio;
        spec.ratio = r.require<double>("ratio");
        if (!(spec.ratio >= 0.0)) {
            throw ValidationError("traffic.handover.ratio: must be >= 0");
        }
    } else if (mode == "flow-balance") {
        spec.mode = HandoverMode::FlowBalance;
        spec.p_h = r.maybe<double>("p_h");
        if (spec.p_h && !(*spec.p_h >= 0.0 && *spec.p_h < 1.0)) {
            throw ValidationError("traffic.handover.p_h: must lie in [0,1)");
        }
    } else {
        throw ValidationError("traffic.handover.mode: expected 'fixed-ratio' or 'flow-balance'");
    }
    r.finish();
    return spec;
}

TrafficSection parse_traffic(const json& j) {
    ObjectReader r(j, "traffic");
    TrafficSection t;
    t.mu = r.maybe<double>("mu");
    t.mu_a = r.maybe<double>("mu_a");
    t.eta = r.maybe<double>("eta");
    t.lambda_n = r.maybe<double>("lambda_n");
    t.rates = r.maybe<std::vector<double>>("rates");
    t.ratio = r.maybe<std::vector<double>>("ratio");
    t.load = r.maybe<double>("load");
    if (r.has("sweep")) t.sweep = parse_sweep(j.at("sweep"));
    if (r.has("handover")) t.handover = parse_handover(j.at("handover"));
    r.finish();

    for (auto [v, name] : {std::pair<std::optional<double>, const char*>{t.mu, "mu"},
                           {t.mu_a, "mu_a"},
                           {t.eta, "eta"},
                           {t.lambda_n, "lambda_n"},
                           {t.load, "load"}}) {
        if (v && !(*v >= 0.0)) {
            throw ValidationError(std::string("traffic.") + name + ": must be >= 0");
        }
    }
    if (t.mu && !(*t.mu > 0.0)) throw ValidationError("traffic.mu: must be > 0");
    return t;
}

RunSection parse_run(const json& j) {
    ObjectReader r(j, "run");
    RunSection run;
    const auto mode = r.require<std::string>("mode");
    if (mode == "solve") run.mode = RunMode::Solve;
    else if (mode == "sweep") run.mode = RunMode::Sweep;
    else if (mode == "simulate") run.mode = RunMode::Simulate;
    else if (mode == "optimize") run.mode = RunMode::Optimize;
    else if (mode == "estimate-handover") run.mode = RunMode::EstimateHandover;
    else throw ValidationError("run.mode: unknown mode '" + mode + "'");

    run.seed = r.maybe<std::uint64_t>("seed");
    run.out = r.value_or<std::string>("out", "");
    if (auto fmt = r.maybe<std::string>("format")) {
        if (*fmt == "csv") run.format = OutputFormat::Csv;
        else if (*fmt == "json") run.format = OutputFormat::Json;
        else throw ValidationError("run.format: expected 'csv' or 'json'");
    }

    run.arrivals = r.value_or<std::int64_t>("arrivals", run.arrivals);
    run.warmup_fraction = r.value_or<double>("warmup_fraction", run.warmup_fraction);
    run.batches = r.value_or<int>("batches", run.batches);
    run.trace = r.value_or<std::string>("trace", "");
    run.holding = r.maybe<std::string>("holding");
    if (run.holding && *run.holding != "direct" && *run.holding != "split") {
        throw ValidationError("run.holding: expected 'direct' or 'split'");
    }

    run.grid_step = r.value_or<double>("grid_step", run.grid_step);
    run.epsilon = r.value_or<double>("epsilon", run.epsilon);
    if (r.has("protected")) {
        run.protected_classes = r.require<std::vector<int>>("protected");
    }
    if (auto obj = r.maybe<std::string>("objective")) {
        if (*obj == "overall-blocking") run.objective = Objective::MinOverallBlocking;
        else if (*obj == "utilization") run.objective = Objective::MaxUtilization;
        else throw ValidationError("run.objective: expected 'overall-blocking' or 'utilization'");
    }
    run.cache = r.value_or<std::string>("cache", "");
    run.qos_floor = r.value_or<double>("qos_floor", run.qos_floor);

    run.tolerance = r.maybe<double>("tolerance");
    run.max_iterations = r.value_or<int>("max_iterations", run.max_iterations);
    run.damping = r.value_or<double>("damping", run.damping);
    r.finish();
    return run;
}

} // namespace

ExperimentConfig parse_config(const json& doc) {
    ObjectReader r(doc, "config");
    ExperimentConfig config;
    config.policy = parse_policy(r.get("policy"));
    config.traffic = parse_traffic(r.get("traffic"));
    config.run = parse_run(r.get("run"));
    r.finish();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(doc);
}

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Solve: return "solve";
        case RunMode::Sweep: return "sweep";
        case RunMode::Simulate: return "simulate";
        case RunMode::Optimize: return "optimize";
        case RunMode::EstimateHandover: return "estimate-handover";
    }
    return "?";
}

} // namespace cacwb
