#ifndef CACWB_CONFIG_HPP
#define CACWB_CONFIG_HPP

/// Declarative experiment configs: one JSON document per run. Unknown keys
/// anywhere in the document are validation errors, and everything is
/// validated before any computation starts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cacwb/optimizer.hpp"
#include "cacwb/policy.hpp"
#include "cacwb/traffic.hpp"

namespace cacwb {

enum class RunMode { Solve, Sweep, Simulate, Optimize, EstimateHandover };
enum class OutputFormat { Csv, Json };

struct SweepRange {
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;
};

struct HandoverSpec {
    HandoverMode mode = HandoverMode::FixedRatio;
    double ratio = 0.0;           // fixed-ratio
    std::optional<double> p_h;    // flow-balance; else derived from eta/mu_a
};

struct TrafficSection {
    std::optional<double> mu;
    std::optional<double> mu_a;
    std::optional<double> eta;
    std::optional<double> lambda_n;
    std::optional<std::vector<double>> rates;
    std::optional<std::vector<double>> ratio;
    std::optional<double> load;
    std::optional<SweepRange> sweep;
    std::optional<HandoverSpec> handover;
};

struct RunSection {
    RunMode mode = RunMode::Solve;
    std::optional<std::uint64_t> seed;
    std::string out;                       // empty: stdout
    std::optional<OutputFormat> format;    // default depends on the mode

    // simulate
    std::int64_t arrivals = 1'000'000;
    double warmup_fraction = 0.1;
    int batches = 20;
    std::string trace;                     // event-trace CSV path, optional
    std::optional<std::string> holding;    // "direct" | "split"

    // optimize
    double grid_step = 0.1;
    double epsilon = 0.10;
    std::vector<int> protected_classes{1, 2};
    Objective objective = Objective::MinOverallBlocking;
    std::string cache;                     // cache file; CACWB_CACHE overrides
    double qos_floor = kDefaultQosFloor;

    // estimate-handover (and flow-balance resolution everywhere)
    std::optional<double> tolerance;
    int max_iterations = 10000;
    double damping = 0.5;
};

struct ExperimentConfig {
    PolicySpec policy;
    TrafficSection traffic;
    RunSection run;
};

/// Parses and validates; throws ValidationError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

std::string to_string(RunMode mode);

} // namespace cacwb

#endif
