#include "cacwb/optimizer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "cacwb/errors.hpp"
#include "cacwb/json_io.hpp"

namespace cacwb {

namespace {

// Snap a grid value to its 12-significant-digit decimal so 3 * 0.1 is
// exactly 0.3 in keys, reports, and comparisons.
double snap12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::vector<int> thresholds_of(const PolicySpec& base) {
    if (const auto* multi = std::get_if<MultiFgb>(&base)) return multi->thresholds;
    if (const auto* fgb = std::get_if<Fgb>(&base)) {
        return {fgb->channels, fgb->guard_start};
    }
    throw ValidationError("optimizer: base policy must be multi-fgb or fgb");
}

std::vector<double> grid_values(double step) {
    std::vector<double> values;
    for (int j = 0; j * step < 1.0 - 1e-12; ++j) values.push_back(snap12(j * step));
    values.push_back(1.0);
    return values;
}

} // namespace

void SearchSpec::validate() const {
    const auto thresholds = thresholds_of(base_policy);
    cacwb::validate(base_policy);
    const int m = static_cast<int>(thresholds.size());
    if (static_cast<int>(rates.size()) != m) {
        throw ValidationError("optimizer: rates length must match the class count");
    }
    if (!(mu > 0.0)) throw ValidationError("optimizer: mu must be positive");
    if (!(grid_step > 0.0 && grid_step <= 1.0)) {
        throw ValidationError("optimizer: grid_step must lie in (0,1]");
    }
    if (!(epsilon_qos >= 0.0)) throw ValidationError("optimizer: epsilon must be >= 0");
    if (!(qos_floor >= 0.0)) throw ValidationError("optimizer: qos_floor must be >= 0");
    for (int k : protected_classes) {
        if (k < 1 || k > m) {
            throw ValidationError("optimizer: protected class " + std::to_string(k) +
                                  " out of range 1.." + std::to_string(m));
        }
    }
}

bool qos_feasible(const MetricsReport& candidate, const MetricsReport& baseline,
                  std::span<const int> protected_classes, double epsilon,
                  double floor) {
    if (candidate.blocking.size() != baseline.blocking.size()) {
        throw ValidationError("qos_feasible: reports have different class counts");
    }
    for (int k : protected_classes) {
        if (k < 1 || k > static_cast<int>(candidate.blocking.size())) {
            throw ValidationError("qos_feasible: protected class out of range");
        }
        const double cand = candidate.blocking[k - 1];
        const double base = baseline.blocking[k - 1];
        if (cand <= floor) continue;
        if (cand > base * (1.0 + epsilon)) return false;
    }
    return true;
}

std::string cache_key(const SearchSpec& spec) {
    const auto thresholds = thresholds_of(spec.base_policy);
    double total = 0.0;
    for (double r : spec.rates) total += r;
    const double scale = total > 0.0 ? total : 1.0;

    char buf[40];
    auto fmt = [&buf](double x) {
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return std::string(buf);
    };

    std::string key = "t=";
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (i) key += ',';
        key += std::to_string(thresholds[i]);
    }
    key += ";r=";
    for (std::size_t i = 0; i < spec.rates.size(); ++i) {
        if (i) key += ',';
        key += fmt(spec.rates[i] / scale);
    }
    key += ";mu=" + fmt(spec.mu / scale);
    key += ";step=" + fmt(spec.grid_step);
    key += ";eps=" + fmt(spec.epsilon_qos);
    key += ";floor=" + fmt(spec.qos_floor);
    key += ";prot=";
    auto sorted = std::vector<int>(spec.protected_classes.begin(),
                                   spec.protected_classes.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) key += ',';
        key += std::to_string(sorted[i]);
    }
    key += ";obj=";
    key += spec.objective == Objective::MinOverallBlocking ? "overall" : "utilization";
    return key;
}

OptimizerCache::OptimizerCache(std::filesystem::path file) : file_(std::move(file)) {}

namespace {

nlohmann::json read_cache_file(const std::filesystem::path& file) {
    if (file.empty() || !std::filesystem::exists(file)) return nlohmann::json::object();
    try {
        std::ifstream in(file);
        nlohmann::json doc = nlohmann::json::parse(in);
        if (!doc.is_object()) throw std::runtime_error("cache root is not an object");
        return doc;
    } catch (const std::exception& e) {
        std::cerr << "warning: optimizer cache unreadable (" << e.what()
                  << "); treating as cold\n";
        return nlohmann::json::object();
    }
}

} // namespace

std::optional<OptimizationResult> OptimizerCache::lookup(const std::string& key) const {
    const nlohmann::json doc = read_cache_file(file_);
    const auto it = doc.find(key);
    if (it == doc.end()) return std::nullopt;
    try {
        OptimizationResult result = optimization_result_from_json(*it);
        result.from_cache = true;
        return result;
    } catch (const std::exception& e) {
        std::cerr << "warning: optimizer cache entry malformed (" << e.what()
                  << "); ignoring\n";
        return std::nullopt;
    }
}

void OptimizerCache::store(const std::string& key, const OptimizationResult& result) {
    if (file_.empty()) return;
    try {
        nlohmann::json doc = read_cache_file(file_);
        doc[key] = to_json(result);
        const auto tmp = file_.string() + ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) throw std::runtime_error("cannot open " + tmp);
            out << doc.dump(2) << '\n';
        }
        std::filesystem::rename(tmp, file_);
    } catch (const std::exception& e) {
        std::cerr << "warning: optimizer cache write failed (" << e.what() << ")\n";
    }
}

OptimizationResult search_acceptance_factors(const SearchSpec& spec,
                                             OptimizerCache* cache) {
    spec.validate();
    const std::string key = cache_key(spec);
    if (cache) {
        if (auto hit = cache->lookup(key)) return *hit;
    }

    const auto thresholds = thresholds_of(spec.base_policy);
    const int m = static_cast<int>(thresholds.size());
    const int free_bands = m - 1;

    const MetricsReport baseline =
        evaluate_policy(PolicySpec{MultiFgb{thresholds}}, spec.rates, spec.mu).metrics;

    const std::vector<double> values = grid_values(spec.grid_step);
    OptimizationResult result;
    result.baseline_metrics = baseline;

    std::vector<double> alpha(free_bands, 0.0);
    std::vector<int> index(free_bands, 0);
    bool have_best = false;
    double best_objective = 0.0;
    double best_utilization = 0.0;

    auto objective_of = [&](const MetricsReport& metrics) {
        return spec.objective == Objective::MinOverallBlocking
                   ? metrics.overall_blocking
                   : -metrics.utilization;
    };

    // Odometer over the grid, lexicographic in the alpha vector.
    while (true) {
        for (int b = 0; b < free_bands; ++b) alpha[b] = values[index[b]];
        const MetricsReport metrics =
            evaluate_policy(PolicySpec{Ubt{thresholds, alpha}}, spec.rates, spec.mu)
                .metrics;
        ++result.evaluated;

        if (qos_feasible(metrics, baseline, spec.protected_classes, spec.epsilon_qos,
                         spec.qos_floor)) {
            const double obj = objective_of(metrics);
            result.feasible.push_back({alpha, obj, metrics.utilization});
            const bool better =
                !have_best || obj < best_objective ||
                (obj == best_objective &&
                 (metrics.utilization > best_utilization ||
                  (metrics.utilization == best_utilization && alpha < result.best_alpha)));
            if (better) {
                have_best = true;
                best_objective = obj;
                best_utilization = metrics.utilization;
                result.best_alpha = alpha;
                result.best_metrics = metrics;
            }
        }

        int b = free_bands - 1;
        for (; b >= 0; --b) {
            if (++index[b] < static_cast<int>(values.size())) break;
            index[b] = 0;
        }
        if (b < 0) break;
    }
    result.feasible_count = static_cast<std::int64_t>(result.feasible.size());

    if (cache) cache->store(key, result);
    return result;
}

} // namespace cacwb
