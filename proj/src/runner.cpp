#include "cacwb/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cacwb/des.hpp"
#include "cacwb/errors.hpp"
#include "cacwb/json_io.hpp"
#include "cacwb/text.hpp"

namespace cacwb {

namespace {

using nlohmann::json;

double snap12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::vector<double> sweep_values(const SweepRange& range) {
    std::vector<double> values;
    const auto n = static_cast<long>((range.max - range.min) / range.step + 1e-9);
    for (long i = 0; i <= n; ++i) {
        values.push_back(snap12(range.min + i * range.step));
    }
    return values;
}

struct TrafficPoint {
    double x = 0.0; // sweep coordinate: lambda_n, or total load in erlangs
    std::vector<double> rates;
    std::optional<TrafficModel> model; // two-class parameterization, resolved
    bool has_fixed_point = false;
    FixedPointReport fixed_point; // flow-balance resolution, when used
};

struct ResolvedTraffic {
    double mu = 0.0;
    bool two_class = false;   // lambda_n/handover parameterization
    bool swept = false;
    std::vector<TrafficPoint> points;
};

double resolve_p_h(const ExperimentConfig& config) {
    const auto& traffic = config.traffic;
    const bool direct = traffic.handover && traffic.handover->p_h.has_value();
    const bool derived = traffic.eta && traffic.mu_a;
    if (direct && derived) {
        throw ValidationError(
            "traffic: give handover.p_h or eta+mu_a, not both");
    }
    if (direct) return *traffic.handover->p_h;
    if (derived) return handover_probability(*traffic.eta, *traffic.mu_a);
    throw ValidationError("traffic: flow balance needs handover.p_h or eta and mu_a");
}

FixedPointOptions fixed_point_options(const RunSection& run) {
    FixedPointOptions options;
    options.damping = run.damping;
    options.tolerance = run.tolerance.value_or(-1.0);
    options.max_iterations = run.max_iterations;
    return options;
}

ResolvedTraffic resolve_traffic(const ExperimentConfig& config) {
    const auto& traffic = config.traffic;
    const int m = num_classes(config.policy);

    ResolvedTraffic resolved;
    if (traffic.mu) {
        resolved.mu = *traffic.mu;
    } else if (traffic.mu_a && traffic.eta) {
        resolved.mu = effective_departure_rate(*traffic.mu_a, *traffic.eta);
        if (!(resolved.mu > 0.0)) {
            throw ValidationError("traffic: mu_a + eta must be positive");
        }
    } else {
        throw ValidationError("traffic: provide mu, or both mu_a and eta");
    }

    const bool ho_mode = config.run.mode == RunMode::EstimateHandover;
    if (traffic.rates) {
        if (traffic.lambda_n || traffic.ratio || traffic.load || traffic.sweep ||
            traffic.handover || ho_mode) {
            throw ValidationError(
                "traffic.rates: excludes lambda_n/ratio/load/sweep/handover");
        }
        if (static_cast<int>(traffic.rates->size()) != m) {
            throw ValidationError("traffic.rates: expected " + std::to_string(m) +
                                  " entries for this policy");
        }
        const double total = std::accumulate(traffic.rates->begin(),
                                             traffic.rates->end(), 0.0);
        TrafficPoint point;
        point.x = total / resolved.mu;
        point.rates = *traffic.rates;
        resolved.points.push_back(std::move(point));
        return resolved;
    }

    if (traffic.ratio) {
        if (traffic.lambda_n || traffic.handover || ho_mode) {
            throw ValidationError("traffic.ratio: excludes lambda_n and handover");
        }
        if (static_cast<int>(traffic.ratio->size()) != m) {
            throw ValidationError("traffic.ratio: expected " + std::to_string(m) +
                                  " entries for this policy");
        }
        double parts = 0.0;
        for (double v : *traffic.ratio) {
            if (!(v >= 0.0)) throw ValidationError("traffic.ratio: entries must be >= 0");
            parts += v;
        }
        if (!(parts > 0.0)) throw ValidationError("traffic.ratio: must sum to > 0");

        std::vector<double> loads;
        if (traffic.sweep) {
            resolved.swept = true;
            loads = sweep_values(*traffic.sweep);
        } else if (traffic.load) {
            loads = {*traffic.load};
        } else {
            throw ValidationError("traffic.ratio: needs load or sweep");
        }
        for (double load : loads) {
            TrafficPoint point;
            point.x = load;
            point.rates.resize(m);
            for (int k = 0; k < m; ++k) {
                point.rates[k] = load * ((*traffic.ratio)[k] / parts) * resolved.mu;
            }
            resolved.points.push_back(std::move(point));
        }
        return resolved;
    }

    // lambda_n / handover parameterization.
    if (m != 2) {
        throw ValidationError("traffic: lambda_n parameterization needs a two-class policy");
    }
    resolved.two_class = true;
    std::vector<double> lambdas;
    if (traffic.sweep) {
        resolved.swept = true;
        lambdas = sweep_values(*traffic.sweep);
    } else if (traffic.lambda_n) {
        lambdas = {*traffic.lambda_n};
    } else {
        throw ValidationError("traffic: provide lambda_n or a sweep");
    }

    const bool flow_balance =
        ho_mode ||
        (traffic.handover && traffic.handover->mode == HandoverMode::FlowBalance);
    if (ho_mode && traffic.handover &&
        traffic.handover->mode == HandoverMode::FixedRatio) {
        throw ValidationError("estimate-handover: requires flow-balance parameters");
    }
    if (!flow_balance && !traffic.handover) {
        throw ValidationError("traffic: two-class runs need a handover section");
    }

    double p_h = 0.0;
    if (flow_balance) p_h = resolve_p_h(config);
    const FixedPointOptions options = fixed_point_options(config.run);

    for (double lambda_n : lambdas) {
        TrafficPoint point;
        point.x = lambda_n;
        TrafficModel model;
        model.lambda_n = lambda_n;
        model.mu = resolved.mu;
        model.mu_a = traffic.mu_a.value_or(0.0);
        model.eta = traffic.eta.value_or(0.0);
        if (flow_balance) {
            model.handover_mode = HandoverMode::FlowBalance;
            point.has_fixed_point = true;
            point.fixed_point = estimate_handover_rate(config.policy, lambda_n, p_h,
                                                       resolved.mu, options);
            model.lambda_h = point.fixed_point.lambda_h;
        } else {
            model.handover_mode = HandoverMode::FixedRatio;
            model.ratio = traffic.handover->ratio;
            model.lambda_h = model.ratio * lambda_n;
        }
        point.rates = {model.lambda_h, model.lambda_n};
        point.model = model;
        resolved.points.push_back(std::move(point));
    }
    return resolved;
}

OutputFormat format_for(const ExperimentConfig& config) {
    if (config.run.format) return *config.run.format;
    return config.run.mode == RunMode::Sweep ? OutputFormat::Csv : OutputFormat::Json;
}

json traffic_echo(const ResolvedTraffic& resolved, const TrafficPoint& point,
                  bool two_class) {
    json t{{"mu", resolved.mu}, {"rates", point.rates}};
    if (two_class && point.model) {
        t["lambda_n"] = point.model->lambda_n;
        t["lambda_h"] = point.model->lambda_h;
        t["handover_mode"] = point.model->handover_mode == HandoverMode::FixedRatio
                                 ? "fixed-ratio"
                                 : "flow-balance";
    } else {
        t["load"] = point.x;
    }
    return t;
}

MetricsReport point_metrics(const ExperimentConfig& config,
                            const TrafficPoint& point, double mu) {
    if (point.has_fixed_point) return point.fixed_point.metrics;
    return evaluate_policy(config.policy, point.rates, mu).metrics;
}

int fixed_point_exit(const ResolvedTraffic& resolved) {
    for (const auto& point : resolved.points) {
        if (point.has_fixed_point && !point.fixed_point.converged) return 4;
    }
    return 0;
}

RunOutcome run_solve(const ExperimentConfig& config, const ResolvedTraffic& resolved) {
    if (resolved.swept) {
        throw ValidationError("solve: takes a single traffic point, not a sweep");
    }
    const auto& point = resolved.points.front();
    const MetricsReport metrics = point_metrics(config, point, resolved.mu);

    json doc{{"mode", "solve"},
             {"policy", to_json(config.policy)},
             {"traffic", traffic_echo(resolved, point, resolved.two_class)},
             {"metrics", to_json(metrics)}};
    if (point.has_fixed_point) {
        doc["handover_estimate"] = to_json(point.fixed_point);
    }
    return {fixed_point_exit(resolved), doc.dump(2) + "\n"};
}

RunOutcome run_sweep(const ExperimentConfig& config, const ResolvedTraffic& resolved,
                     OutputFormat format) {
    if (!resolved.swept) {
        throw ValidationError("sweep: needs a traffic.sweep section");
    }
    const int m = num_classes(config.policy);

    std::vector<std::string> columns;
    columns.push_back(resolved.two_class ? "lambda_n" : "total_load");
    if (resolved.two_class) {
        columns.push_back("lambda_h");
        columns.push_back("pb_new");
    } else {
        for (int k = 1; k <= m; ++k) columns.push_back("pb_" + std::to_string(k));
    }
    columns.insert(columns.end(), {"p_d", "utilization", "overall_blocking"});

    std::vector<std::vector<double>> rows;
    rows.reserve(resolved.points.size());
    for (const auto& point : resolved.points) {
        const MetricsReport metrics = point_metrics(config, point, resolved.mu);
        std::vector<double> row;
        row.push_back(point.x);
        if (resolved.two_class) {
            row.push_back(point.rates[0]);
            row.push_back(metrics.blocking[1]);
        } else {
            for (int k = 0; k < m; ++k) row.push_back(metrics.blocking[k]);
        }
        row.push_back(metrics.dropping);
        row.push_back(metrics.utilization);
        row.push_back(metrics.overall_blocking);
        rows.push_back(std::move(row));
    }

    RunOutcome outcome;
    outcome.exit_code = fixed_point_exit(resolved);
    if (format == OutputFormat::Csv) {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += columns[c];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += format_double(row[c]);
            }
            out += '\n';
        }
        outcome.output = std::move(out);
    } else {
        json array = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t c = 0; c < row.size(); ++c) obj[columns[c]] = row[c];
            array.push_back(std::move(obj));
        }
        json doc{{"mode", "sweep"}, {"policy", to_json(config.policy)}, {"rows", array}};
        outcome.output = doc.dump(2) + "\n";
    }
    return outcome;
}

RunOutcome run_simulate(const ExperimentConfig& config,
                        const ResolvedTraffic& resolved, OutputFormat format) {
    if (resolved.swept) {
        throw ValidationError("simulate: takes a single traffic point, not a sweep");
    }
    if (!config.run.seed) {
        throw ValidationError("simulate: a seed is required (run.seed or --seed)");
    }
    const auto& point = resolved.points.front();

    SimConfig sim;
    sim.policy = config.policy;
    sim.rates = point.rates;
    sim.total_arrivals = config.run.arrivals;
    sim.warmup_fraction = config.run.warmup_fraction;
    sim.batches = config.run.batches;
    sim.seed = *config.run.seed;
    const bool split = config.run.holding ? *config.run.holding == "split"
                                          : !config.traffic.mu.has_value();
    if (split) {
        if (!config.traffic.mu_a || !config.traffic.eta) {
            throw ValidationError("simulate: split holding needs traffic.mu_a and traffic.eta");
        }
        sim.split_holding = true;
        sim.mu_a = *config.traffic.mu_a;
        sim.eta = *config.traffic.eta;
    } else {
        sim.mu = resolved.mu;
    }
    sim.validate();

    SimReport report;
    if (!config.run.trace.empty()) {
        std::ofstream trace(config.run.trace);
        if (!trace) {
            throw ValidationError("simulate: cannot open trace file " + config.run.trace);
        }
        trace << "time,kind,class,occupancy\n";
        report = simulate(sim, &trace);
    } else {
        report = simulate(sim);
    }

    RunOutcome outcome;
    outcome.exit_code = fixed_point_exit(resolved);
    if (format == OutputFormat::Json) {
        json doc{{"mode", "simulate"},
                 {"policy", to_json(config.policy)},
                 {"traffic", traffic_echo(resolved, point, resolved.two_class)},
                 {"report", to_json(report)}};
        if (point.has_fixed_point) {
            doc["handover_estimate"] = to_json(point.fixed_point);
        }
        outcome.output = doc.dump(2) + "\n";
    } else {
        const int m = static_cast<int>(report.blocking.size());
        std::string head = "seed";
        std::string row = std::to_string(report.seed);
        for (int k = 0; k < m; ++k) {
            const auto tag = std::to_string(k + 1);
            head += ",pb_" + tag + ",pb_" + tag + "_hw";
            row += ',' + format_double(report.blocking[k].value);
            row += ',' + format_double(report.blocking[k].half_width);
        }
        head += ",p_d,p_d_hw,utilization,utilization_hw";
        row += ',' + format_double(report.dropping.value);
        row += ',' + format_double(report.dropping.half_width);
        row += ',' + format_double(report.utilization.value);
        row += ',' + format_double(report.utilization.half_width);
        for (int k = 0; k < m; ++k) {
            head += ",arrivals_" + std::to_string(k + 1);
            row += ',' + std::to_string(report.arrivals[k]);
        }
        for (int k = 0; k < m; ++k) {
            head += ",accepted_" + std::to_string(k + 1);
            row += ',' + std::to_string(report.accepted[k]);
        }
        head += ",trace_digest";
        row += ',' + std::to_string(report.trace_digest);
        outcome.output = head + "\n" + row + "\n";
    }
    return outcome;
}

RunOutcome run_optimize(const ExperimentConfig& config,
                        const ResolvedTraffic& resolved, OutputFormat format) {
    if (resolved.swept) {
        throw ValidationError("optimize: takes a single traffic point, not a sweep");
    }
    if (format == OutputFormat::Csv) {
        throw ValidationError("optimize: emits a JSON document; csv is not supported");
    }
    const auto& point = resolved.points.front();

    SearchSpec spec;
    spec.base_policy = config.policy;
    spec.rates = point.rates;
    spec.mu = resolved.mu;
    spec.grid_step = config.run.grid_step;
    spec.protected_classes = config.run.protected_classes;
    spec.epsilon_qos = config.run.epsilon;
    spec.qos_floor = config.run.qos_floor;
    spec.objective = config.run.objective;

    std::string cache_path = config.run.cache;
    if (const char* env = std::getenv("CACWB_CACHE")) cache_path = env;

    OptimizationResult result;
    if (!cache_path.empty()) {
        OptimizerCache cache{std::filesystem::path(cache_path)};
        result = search_acceptance_factors(spec, &cache);
    } else {
        result = search_acceptance_factors(spec);
    }

    json doc{{"mode", "optimize"},
             {"policy", to_json(config.policy)},
             {"traffic", traffic_echo(resolved, point, resolved.two_class)},
             {"search",
              json{{"grid_step", spec.grid_step},
                   {"epsilon", spec.epsilon_qos},
                   {"qos_floor", spec.qos_floor},
                   {"protected", spec.protected_classes},
                   {"objective", spec.objective == Objective::MinOverallBlocking
                                     ? "overall-blocking"
                                     : "utilization"}}},
             {"result", to_json(result)}};
    return {0, doc.dump(2) + "\n"};
}

RunOutcome run_estimate(const ExperimentConfig& config,
                        const ResolvedTraffic& resolved, OutputFormat format) {
    RunOutcome outcome;
    outcome.exit_code = fixed_point_exit(resolved);

    if (format == OutputFormat::Csv) {
        std::string out =
            "lambda_n,lambda_h,iterations,residual,converged,pb_new,p_d,"
            "utilization,overall_blocking\n";
        for (const auto& point : resolved.points) {
            const auto& fp = point.fixed_point;
            out += format_double(point.x);
            out += ',' + format_double(fp.lambda_h);
            out += ',' + std::to_string(fp.iterations);
            out += ',' + format_double(fp.residual);
            out += ',' + std::string(fp.converged ? "1" : "0");
            out += ',' + format_double(fp.metrics.blocking[1]);
            out += ',' + format_double(fp.metrics.dropping);
            out += ',' + format_double(fp.metrics.utilization);
            out += ',' + format_double(fp.metrics.overall_blocking);
            out += '\n';
        }
        outcome.output = std::move(out);
    } else {
        json points = json::array();
        for (const auto& point : resolved.points) {
            json entry = to_json(point.fixed_point);
            entry["lambda_n"] = point.x;
            points.push_back(std::move(entry));
        }
        json doc{{"mode", "estimate-handover"},
                 {"policy", to_json(config.policy)},
                 {"points", points}};
        outcome.output = doc.dump(2) + "\n";
    }
    return outcome;
}

} // namespace

RunOutcome run_experiment(const ExperimentConfig& config) {
    validate(config.policy);
    const ResolvedTraffic resolved = resolve_traffic(config);
    const OutputFormat format = format_for(config);

    switch (config.run.mode) {
        case RunMode::Solve: return run_solve(config, resolved);
        case RunMode::Sweep: return run_sweep(config, resolved, format);
        case RunMode::Simulate: return run_simulate(config, resolved, format);
        case RunMode::Optimize: return run_optimize(config, resolved, format);
        case RunMode::EstimateHandover: return run_estimate(config, resolved, format);
    }
    throw SolverError("unreachable mode");
}

} // namespace cacwb
