#ifndef CACWB_TRAFFIC_HPP
#define CACWB_TRAFFIC_HPP

/// Cell traffic parameters and the handover-rate flow-balance estimator.
///
/// The handover arrival rate is either a fixed ratio of the new-call rate
/// or the solution of the flow-balance equation
///   lambda_h = lambda_n (1 - P_B) P_h / (1 - P_h (1 - P_D)),
/// where (P_B, P_D) come from solving the admission policy at the current
/// lambda_h. The second form couples the estimator to the chain solver and
/// is resolved by damped fixed-point iteration.

#include "cacwb/markov.hpp"
#include "cacwb/policy.hpp"

namespace cacwb {

enum class HandoverMode { FixedRatio, FlowBalance };

struct TrafficModel {
    double lambda_n = 0.0; // new-call arrival rate, calls/s
    double mu_a = 0.0;     // 1 / mean call duration
    double eta = 0.0;      // 1 / mean cell dwell time
    double mu = 0.0;       // channel departure rate used by the chain
    HandoverMode handover_mode = HandoverMode::FixedRatio;
    double ratio = 0.0;    // FixedRatio: lambda_h = ratio * lambda_n
    double lambda_h = 0.0; // resolved handover rate
};

/// P_h = eta / (eta + mu_a). Throws SolverError when both rates are zero.
double handover_probability(double eta, double mu_a);

/// Rate of min(Exp(mu_a), Exp(eta)): simply mu_a + eta.
double effective_departure_rate(double mu_a, double eta);

/// One evaluation of the flow-balance expression; no iteration. Throws
/// SolverError when the denominator 1 - P_h (1 - P_D) vanishes.
double handover_rate_balance(double lambda_n, double p_h, double p_b, double p_d);

struct FixedPointOptions {
    double damping = 0.5;         // weight of the fresh balance value
    double tolerance = -1.0;      // < 0: use 1e-9 * max(lambda_n, 1)
    int max_iterations = 10000;
};

struct FixedPointReport {
    double lambda_h = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    MetricsReport metrics; // at the final iterate
};

/// Damped fixed-point iteration for the flow-balance handover rate under
/// a two-class policy (class 0 = handover, class 1 = new). Starts from the
/// lossless value lambda_n * P_h / (1 - P_h). Never throws on failure to
/// converge; the report carries converged=false and the last iterate.
FixedPointReport estimate_handover_rate(const PolicySpec& policy, double lambda_n,
                                        double p_h, double mu,
                                        const FixedPointOptions& options = {});

} // namespace cacwb

#endif
