#ifndef CACWB_OPTIMIZER_HPP
#define CACWB_OPTIMIZER_HPP

/// Acceptance-factor search for band-thinning schemes.
///
/// Takes a guard-band baseline (MultiFgb, or Fgb treated as its two-class
/// equivalent), enumerates every alpha vector on a uniform grid, keeps the
/// candidates whose protected-class blocking stays within a relative slack
/// of the baseline, and returns the feasible candidate with the best
/// objective. The all-zero vector reproduces the baseline exactly, so the
/// feasible set is never empty. Results are memoized in a JSON cache file
/// keyed by the load-scaled problem.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cacwb/policy.hpp"

namespace cacwb {

enum class Objective { MinOverallBlocking, MaxUtilization };

/// Protected classes whose blocking sits below this floor are treated as
/// unharmed regardless of the relative slack: probabilities this small are
/// below the resolution of the comparison.
inline constexpr double kDefaultQosFloor = 1e-12;

struct SearchSpec {
    PolicySpec base_policy; // MultiFgb or Fgb
    std::vector<double> rates;
    double mu = 0.0;
    double grid_step = 0.1;
    std::vector<int> protected_classes; // 1-based, default {1}
    double epsilon_qos = 0.10;
    double qos_floor = kDefaultQosFloor;
    Objective objective = Objective::MinOverallBlocking;

    void validate() const;
};

struct FeasiblePoint {
    std::vector<double> alpha;
    double objective_value = 0.0;
    double utilization = 0.0;
};

struct OptimizationResult {
    std::vector<double> best_alpha;
    MetricsReport best_metrics;
    MetricsReport baseline_metrics;
    std::int64_t evaluated = 0;
    std::int64_t feasible_count = 0;
    bool from_cache = false;
    std::vector<FeasiblePoint> feasible; // full feasible set, grid order
};

/// True iff PB_k(candidate) <= PB_k(baseline) * (1 + epsilon) for every
/// protected class k (1-based), where blocking below `floor` on the
/// candidate side always passes.
bool qos_feasible(const MetricsReport& candidate, const MetricsReport& baseline,
                  std::span<const int> protected_classes, double epsilon,
                  double floor = kDefaultQosFloor);

/// Canonical cache key: thresholds plus the load-scaled traffic (rates and
/// mu divided by the total arrival rate, 12 significant digits), step,
/// slack, floor, protected set, and objective. Scaling every rate and mu
/// by the same constant yields the same key.
std::string cache_key(const SearchSpec& spec);

/// One JSON document per key in a single cache file. Read/write failures
/// and unparsable content degrade to a cold cache with a warning on
/// stderr; they never fail the search.
class OptimizerCache {
public:
    OptimizerCache() = default; // in-memory only
    explicit OptimizerCache(std::filesystem::path file);

    std::optional<OptimizationResult> lookup(const std::string& key) const;
    void store(const std::string& key, const OptimizationResult& result);

    const std::filesystem::path& file() const { return file_; }

private:
    std::filesystem::path file_;
};

/// Exhaustive grid search. With a cache, a hit returns the stored result
/// with from_cache set; otherwise the fresh result is stored before
/// returning. Ties on the objective break toward higher utilization, then
/// the lexicographically smallest alpha vector.
OptimizationResult search_acceptance_factors(const SearchSpec& spec,
                                             OptimizerCache* cache = nullptr);

} // namespace cacwb

#endif
