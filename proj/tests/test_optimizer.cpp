// Acceptance-factor grid search, feasibility predicate, and the cache.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "cacwb/errors.hpp"
#include "cacwb/optimizer.hpp"

using namespace cacwb;

namespace {

MetricsReport metrics_with_blocking(std::vector<double> blocking) {
    MetricsReport metrics;
    metrics.blocking = std::move(blocking);
    return metrics;
}

SearchSpec small_spec() {
    SearchSpec spec;
    spec.base_policy = MultiFgb{{4, 2}};
    spec.rates = {1.0, 2.0};
    spec.mu = 1.0;
    spec.grid_step = 0.5;
    spec.protected_classes = {1};
    spec.epsilon_qos = 0.1;
    return spec;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const char* name)
        : path(std::filesystem::temp_directory_path() /
               (std::string("cacwb_test_") + name + "_" + std::to_string(::getpid()))) {
        std::filesystem::remove(path);
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("qos_feasible") {
    const auto base = metrics_with_blocking({0.10, 0.30});
    const int protect_one[] = {1};
    CHECK(qos_feasible(base, base, protect_one, 0.0));
    CHECK(qos_feasible(metrics_with_blocking({0.109, 0.9}), base, protect_one, 0.10));
    CHECK(!qos_feasible(metrics_with_blocking({0.12, 0.1}), base, protect_one, 0.10));
    const int protect_both[] = {1, 2};
    CHECK(!qos_feasible(metrics_with_blocking({0.10, 0.34}), base, protect_both, 0.10));

    // Sub-floor blocking always passes: the candidate is unharmed at the
    // resolution of the comparison even if the ratio looks large.
    CHECK(qos_feasible(metrics_with_blocking({1e-13, 0.0}),
                       metrics_with_blocking({1e-17, 0.0}), protect_one, 0.10));
    CHECK(!qos_feasible(metrics_with_blocking({1e-6, 0.0}),
                        metrics_with_blocking({1e-9, 0.0}), protect_one, 0.10));

    CHECK_THROWS_AS(qos_feasible(metrics_with_blocking({0.1}), base, protect_one, 0.1),
                    ValidationError);
    const int out_of_range[] = {3};
    CHECK_THROWS_AS(qos_feasible(base, base, out_of_range, 0.1), ValidationError);
}

TEST_CASE("grid enumeration basics") {
    const auto result = search_acceptance_factors(small_spec());
    CHECK(result.evaluated == 3); // {0, 0.5, 1}
    CHECK(!result.from_cache);
    CHECK(result.feasible_count >= 1);

    // The all-zero vector reproduces the baseline bit for bit.
    bool found_zero = false;
    for (const auto& point : result.feasible) {
        if (point.alpha == std::vector<double>{0.0}) {
            found_zero = true;
            CHECK(point.objective_value == result.baseline_metrics.overall_blocking);
        }
    }
    CHECK(found_zero);
    CHECK(result.best_metrics.overall_blocking <=
          result.baseline_metrics.overall_blocking);
}

TEST_CASE("fgb base behaves as its two-class multi-fgb equivalent") {
    SearchSpec a = small_spec();
    SearchSpec b = small_spec();
    b.base_policy = Fgb{4, 2};
    const auto ra = search_acceptance_factors(a);
    const auto rb = search_acceptance_factors(b);
    CHECK(ra.best_alpha == rb.best_alpha);
    CHECK(ra.best_metrics.overall_blocking == rb.best_metrics.overall_blocking);
    CHECK(cache_key(a) == cache_key(b));
}

TEST_CASE("vacuous constraint drives the band open") {
    SearchSpec spec = small_spec();
    spec.grid_step = 0.1;
    spec.epsilon_qos = 1e9;
    const auto result = search_acceptance_factors(spec);
    CHECK(result.evaluated == 11);
    CHECK(result.feasible_count == 11);
    CHECK(result.best_alpha == std::vector<double>{1.0});
}

TEST_CASE("zero slack at an interior load returns the baseline vector") {
    SearchSpec spec = small_spec();
    spec.grid_step = 0.1;
    spec.epsilon_qos = 0.0;
    // Load big enough that PB_1 is far above the floor and any thinning
    // strictly raises it.
    spec.rates = {2.0, 4.0};
    const auto result = search_acceptance_factors(spec);
    CHECK(result.best_alpha == std::vector<double>{0.0});
    CHECK(result.best_metrics.overall_blocking ==
          result.baseline_metrics.overall_blocking);
}

TEST_CASE("repeated runs are identical and never worse than the baseline") {
    SearchSpec spec;
    spec.base_policy = MultiFgb{{6, 4, 2}};
    spec.rates = {0.8, 1.6, 2.4};
    spec.mu = 1.0;
    spec.grid_step = 0.25;
    spec.protected_classes = {1};
    spec.epsilon_qos = 0.2;
    const auto a = search_acceptance_factors(spec);
    const auto b = search_acceptance_factors(spec);
    CHECK(a.best_alpha == b.best_alpha);
    CHECK(a.evaluated == 25);
    CHECK(a.best_metrics.overall_blocking <= a.baseline_metrics.overall_blocking);
    for (const auto& point : a.feasible) {
        CHECK(a.best_metrics.overall_blocking <= point.objective_value);
    }
}

TEST_CASE("full ties break toward the lexicographically smallest vector") {
    // Zero load: every candidate scores 0 on both objective and
    // utilization, so only the tie-break decides.
    SearchSpec spec;
    spec.base_policy = MultiFgb{{4, 2}};
    spec.rates = {0.0, 0.0};
    spec.mu = 1.0;
    spec.grid_step = 0.5;
    spec.protected_classes = {1};
    const auto result = search_acceptance_factors(spec);
    CHECK(result.feasible_count == 3);
    CHECK(result.best_alpha == std::vector<double>{0.0});
}

TEST_CASE("utilization objective") {
    SearchSpec spec = small_spec();
    spec.grid_step = 0.25;
    spec.objective = Objective::MaxUtilization;
    spec.epsilon_qos = 1e9;
    const auto result = search_acceptance_factors(spec);
    for (const auto& point : result.feasible) {
        CHECK(result.best_metrics.utilization >= point.utilization);
    }
}

TEST_CASE("cache") {
    SUBCASE("store then lookup round-trips bit-identically") {
        TempFile file("roundtrip");
        OptimizerCache cache(file.path);
        SearchSpec spec = small_spec();
        const auto fresh = search_acceptance_factors(spec, &cache);
        CHECK(!fresh.from_cache);

        const auto hit = cache.lookup(cache_key(spec));
        REQUIRE(hit.has_value());
        CHECK(hit->from_cache);
        CHECK(hit->best_alpha == fresh.best_alpha);
        CHECK(hit->best_metrics.overall_blocking == fresh.best_metrics.overall_blocking);
        CHECK(hit->feasible_count == fresh.feasible_count);

        const auto again = search_acceptance_factors(spec, &cache);
        CHECK(again.from_cache);
        CHECK(again.best_alpha == fresh.best_alpha);
    }
    SUBCASE("scaled traffic hits the same key") {
        SearchSpec spec = small_spec();
        SearchSpec scaled = spec;
        for (double& r : scaled.rates) r *= 2.0;
        scaled.mu *= 2.0;
        CHECK(cache_key(spec) == cache_key(scaled));

        SearchSpec different = spec;
        different.rates[0] *= 2.0; // changes the mix, not just the scale
        CHECK(cache_key(spec) != cache_key(different));
    }
    SUBCASE("cold cache misses") {
        TempFile file("cold");
        OptimizerCache cache(file.path);
        CHECK(!cache.lookup("t=4,2;nothing").has_value());
    }
    SUBCASE("corrupt cache degrades to cold and is then rewritten") {
        TempFile file("corrupt");
        {
            std::ofstream out(file.path);
            out << "this is not json";
        }
        OptimizerCache cache(file.path);
        SearchSpec spec = small_spec();
        const auto result = search_acceptance_factors(spec, &cache);
        CHECK(!result.from_cache);
        const auto hit = cache.lookup(cache_key(spec));
        CHECK(hit.has_value());
    }
}

TEST_CASE("search spec validation") {
    SearchSpec spec = small_spec();
    spec.base_policy = Ufc{4, 0.5};
    CHECK_THROWS_AS(search_acceptance_factors(spec), ValidationError);
    spec = small_spec();
    spec.grid_step = 0.0;
    CHECK_THROWS_AS(search_acceptance_factors(spec), ValidationError);
    spec = small_spec();
    spec.protected_classes = {5};
    CHECK_THROWS_AS(search_acceptance_factors(spec), ValidationError);
    spec = small_spec();
    spec.rates = {1.0};
    CHECK_THROWS_AS(search_acceptance_factors(spec), ValidationError);
}
