#include "cacwb/json_io.hpp"

namespace cacwb {

using nlohmann::json;

json to_json(const MetricsReport& metrics) {
    return json{{"blocking", metrics.blocking},
                {"dropping", metrics.dropping},
                {"utilization", metrics.utilization},
                {"overall_blocking", metrics.overall_blocking},
                {"carried_load", metrics.carried_load},
                {"mean_occupancy", metrics.mean_occupancy}};
}

MetricsReport metrics_from_json(const json& j) {
    MetricsReport metrics;
    j.at("blocking").get_to(metrics.blocking);
    j.at("dropping").get_to(metrics.dropping);
    j.at("utilization").get_to(metrics.utilization);
    j.at("overall_blocking").get_to(metrics.overall_blocking);
    j.at("carried_load").get_to(metrics.carried_load);
    j.at("mean_occupancy").get_to(metrics.mean_occupancy);
    return metrics;
}

json to_json(const PolicySpec& spec) {
    json j{{"scheme", scheme_name(spec)}};
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Nps>) {
                j["C"] = s.channels;
                j["classes"] = s.classes;
            } else if constexpr (std::is_same_v<T, Fgb>) {
                j["C"] = s.channels;
                j["M"] = s.guard_start;
            } else if constexpr (std::is_same_v<T, Fgc>) {
                j["C"] = s.channels;
                j["alphas"] = s.alphas;
            } else if constexpr (std::is_same_v<T, Lfc>) {
                j["C"] = s.channels;
                j["M"] = s.thinned_state;
                j["alpha"] = s.alpha;
            } else if constexpr (std::is_same_v<T, Ufc>) {
                j["C"] = s.channels;
                j["alpha"] = s.alpha;
            } else if constexpr (std::is_same_v<T, Ufb>) {
                j["C"] = s.channels;
                j["M"] = s.fractional_start;
                j["N"] = s.guard_start;
                j["alpha"] = s.alpha;
            } else if constexpr (std::is_same_v<T, MultiFgb>) {
                j["thresholds"] = s.thresholds;
            } else if constexpr (std::is_same_v<T, Ubt>) {
                j["thresholds"] = s.thresholds;
                j["alphas"] = s.alphas;
            }
        },
        spec);
    return j;
}

json to_json(const FixedPointReport& report) {
    return json{{"lambda_h", report.lambda_h},
                {"iterations", report.iterations},
                {"residual", report.residual},
                {"converged", report.converged},
                {"metrics", to_json(report.metrics)}};
}

namespace {

json to_json(const EstimateCI& ci) {
    return json{{"value", ci.value}, {"half_width", ci.half_width}};
}

} // namespace

json to_json(const SimReport& report) {
    json blocking = json::array();
    for (const auto& ci : report.blocking) blocking.push_back(to_json(ci));
    return json{{"blocking", blocking},
                {"dropping", to_json(report.dropping)},
                {"utilization", to_json(report.utilization)},
                {"arrivals", report.arrivals},
                {"accepted", report.accepted},
                {"seed", report.seed},
                {"trace_digest", report.trace_digest}};
}

json to_json(const OptimizationResult& result) {
    json feasible = json::array();
    for (const auto& point : result.feasible) {
        feasible.push_back(json{{"alpha", point.alpha},
                                {"objective", point.objective_value},
                                {"utilization", point.utilization}});
    }
    return json{{"best_alpha", result.best_alpha},
                {"best_metrics", to_json(result.best_metrics)},
                {"baseline_metrics", to_json(result.baseline_metrics)},
                {"evaluated", result.evaluated},
                {"feasible_count", result.feasible_count},
                {"from_cache", result.from_cache},
                {"feasible", feasible}};
}

OptimizationResult optimization_result_from_json(const json& j) {
    OptimizationResult result;
    j.at("best_alpha").get_to(result.best_alpha);
    result.best_metrics = metrics_from_json(j.at("best_metrics"));
    result.baseline_metrics = metrics_from_json(j.at("baseline_metrics"));
    j.at("evaluated").get_to(result.evaluated);
    j.at("feasible_count").get_to(result.feasible_count);
    result.from_cache = false;
    for (const auto& point : j.at("feasible")) {
        FeasiblePoint fp;
        point.at("alpha").get_to(fp.alpha);
        point.at("objective").get_to(fp.objective_value);
        point.at("utilization").get_to(fp.utilization);
        result.feasible.push_back(std::move(fp));
    }
    return result;
}

} // namespace cacwb
