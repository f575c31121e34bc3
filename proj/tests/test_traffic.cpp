// Handover model and the flow-balance fixed point.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cacwb/errors.hpp"
#include "cacwb/traffic.hpp"

using namespace cacwb;

TEST_CASE("handover_probability") {
    CHECK(handover_probability(0.0, 1.0 / 90.0) == 0.0);
    CHECK(handover_probability(1.0 / 360.0, 1.0 / 90.0) ==
          doctest::Approx(0.2).epsilon(1e-15));
    CHECK(handover_probability(1.0 / 360.0, 0.0) == 1.0);
    CHECK_THROWS_AS(handover_probability(0.0, 0.0), SolverError);
    CHECK_THROWS_AS(handover_probability(-1.0, 1.0), SolverError);

    // Increasing in eta, decreasing in mu_a.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1e-4, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double eta = u(rng);
        const double mu_a = u(rng);
        const double d = u(rng);
        CHECK(handover_probability(eta + d, mu_a) >= handover_probability(eta, mu_a));
        CHECK(handover_probability(eta, mu_a + d) <= handover_probability(eta, mu_a));
        const double p = handover_probability(eta, mu_a);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("effective_departure_rate") {
    CHECK(effective_departure_rate(1.0 / 90.0, 0.0) == 1.0 / 90.0);
    CHECK(effective_departure_rate(0.0, 1.0 / 360.0) == 1.0 / 360.0);
    CHECK(effective_departure_rate(1.0 / 90.0, 1.0 / 360.0) ==
          doctest::Approx(5.0 / 360.0).epsilon(1e-15));
}

TEST_CASE("handover_rate_balance") {
    CHECK(handover_rate_balance(1.0, 0.2, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(handover_rate_balance(5.0, 0.0, 0.3, 0.7) == 0.0);
    CHECK(handover_rate_balance(1.0, 0.2, 0.5, 0.5) ==
          doctest::Approx(0.1 / 0.9).epsilon(1e-15));
    CHECK_THROWS_AS(handover_rate_balance(1.0, 1.0, 0.0, 0.0), SolverError);
    CHECK_THROWS_AS(handover_rate_balance(1.0, 1.2, 0.0, 0.0), SolverError);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> ph(0.0, 0.99);
    for (int trial = 0; trial < 200; ++trial) {
        const double lambda_n = 6.0 * unit(rng);
        const double p_h = ph(rng);
        const double p_b = unit(rng);
        const double p_d = unit(rng);
        const double lh = handover_rate_balance(lambda_n, p_h, p_b, p_d);
        CHECK(lh >= 0.0);
        const bool zero_flow = lambda_n * p_h * (1.0 - p_b) == 0.0;
        CHECK((lh == 0.0) == zero_flow);
    }
}

TEST_CASE("estimate_handover_rate") {
    SUBCASE("no offered traffic converges immediately") {
        const auto report = estimate_handover_rate(Fgb{10, 8}, 0.0, 0.2, 1.0);
        CHECK(report.converged);
        CHECK(report.iterations == 1);
        CHECK(report.lambda_h == 0.0);
    }
    SUBCASE("lossless limit of the balance") {
        // Plenty of channels: P_B ~ P_D ~ 0, so lambda_h -> lambda_n/4 at P_h=0.2.
        const auto report = estimate_handover_rate(Nps{80}, 2.0, 0.2, 1.0);
        CHECK(report.converged);
        CHECK(report.lambda_h == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("self-consistency at the solution") {
        const auto report = estimate_handover_rate(Fgb{20, 16}, 12.0, 0.2, 1.0);
        REQUIRE(report.converged);
        const double balance = handover_rate_balance(
            12.0, 0.2, report.metrics.blocking[1], report.metrics.dropping);
        CHECK(std::fabs(report.lambda_h - balance) <= 1e-9 * 12.0);
        CHECK(report.residual <= 1e-9 * 12.0);
    }
    SUBCASE("flow balance undercuts the lossless fixed-ratio value under blocking") {
        const double mu = 1.0 / 90.0;
        const auto report = estimate_handover_rate(Fgb{100, 90}, 6.0, 0.2, mu);
        REQUIRE(report.converged);
        CHECK(report.metrics.blocking[1] > 1e-6);
        CHECK(report.lambda_h < 6.0 * 0.2 / 0.8);
    }
    SUBCASE("iteration cap reports non-convergence with the last iterate") {
        FixedPointOptions options;
        options.max_iterations = 1;
        const auto report =
            estimate_handover_rate(Fgb{100, 90}, 6.0, 0.2, 1.0 / 90.0, options);
        CHECK(!report.converged);
        CHECK(report.iterations == 1);
        CHECK(report.residual > 0.0);
        CHECK(std::isfinite(report.lambda_h));
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(estimate_handover_rate(Fgb{10, 8}, -1.0, 0.2, 1.0),
                        ValidationError);
        CHECK_THROWS_AS(estimate_handover_rate(Fgb{10, 8}, 1.0, 1.0, 1.0),
                        ValidationError);
        CHECK_THROWS_AS(
            estimate_handover_rate(MultiFgb{{10, 8, 6}}, 1.0, 0.2, 1.0),
            ValidationError);
    }
}
