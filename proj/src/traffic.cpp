#include "cacwb/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "cacwb/errors.hpp"

namespace cacwb {

double handover_probability(double eta, double mu_a) {
    if (!(eta >= 0.0) || !(mu_a >= 0.0)) {
        throw SolverError("handover_probability: rates must be nonnegative");
    }
    if (eta + mu_a <= 0.0) {
        throw SolverError("handover_probability: eta + mu_a must be positive");
    }
    return eta / (eta + mu_a);
}

double effective_departure_rate(double mu_a, double eta) {
    if (!(eta >= 0.0) || !(mu_a >= 0.0)) {
        throw SolverError("effective_departure_rate: rates must be nonnegative");
    }
    return mu_a + eta;
}

double handover_rate_balance(double lambda_n, double p_h, double p_b, double p_d) {
    if (!(p_h >= 0.0 && p_h <= 1.0) || !(p_b >= 0.0 && p_b <= 1.0) ||
        !(p_d >= 0.0 && p_d <= 1.0)) {
        throw SolverError("handover_rate_balance: probabilities must lie in [0,1]");
    }
    const double denom = 1.0 - p_h * (1.0 - p_d);
    if (denom <= 0.0) {
        throw SolverError("handover_rate_balance: degenerate denominator (P_h(1-P_D) = 1)");
    }
    return lambda_n * (1.0 - p_b) * p_h / denom;
}

FixedPointReport estimate_handover_rate(const PolicySpec& policy, double lambda_n,
                                        double p_h, double mu,
                                        const FixedPointOptions& options) {
    validate(policy);
    if (num_classes(policy) != 2) {
        throw ValidationError("estimate_handover_rate: requires a two-class policy");
    }
    if (!(p_h >= 0.0 && p_h < 1.0)) {
        throw ValidationError("estimate_handover_rate: P_h must lie in [0,1)");
    }
    if (!(lambda_n >= 0.0)) {
        throw ValidationError("estimate_handover_rate: lambda_n must be nonnegative");
    }
    const double tol = options.tolerance >= 0.0
                           ? options.tolerance
                           : 1e-9 * std::max(lambda_n, 1.0);

    const AdmissionProfile profile = build_profile(policy);
    FixedPointReport report;
    // Lossless starting point: what the balance gives at P_B = P_D = 0.
    report.lambda_h = lambda_n * p_h / (1.0 - p_h);

    for (int it = 1; it <= options.max_iterations; ++it) {
        const double rates[2] = {report.lambda_h, lambda_n};
        const StationaryDistribution dist = stationary_distribution(profile, rates, mu);
        report.metrics = compute_metrics(dist, profile, rates, mu);
        const double balance = handover_rate_balance(
            lambda_n, p_h, report.metrics.blocking[1], report.metrics.dropping);
        report.iterations = it;
        report.residual = std::abs(balance - report.lambda_h);
        if (report.residual <= tol) {
            report.converged = true;
            return report;
        }
        report.lambda_h = (1.0 - options.damping) * report.lambda_h +
                          options.damping * balance;
    }
    return report; // converged stays false; last iterate and residual reported
}

} // namespace cacwb
