#ifndef CACWB_MARKOV_HPP
#define CACWB_MARKOV_HPP

/// State-dependent birth-death chain solver for single-cell loss systems.
///
/// Every admission scheme is compiled into an AdmissionProfile: a matrix of
/// per-class, per-state acceptance probabilities. The chain has states
/// 0..C (busy channels), arrival rate Lambda(i) = sum_k a[k][i] * lambda_k
/// in state i and departure rate i*mu. A full system (state C) admits
/// nothing regardless of the profile.
///
/// Class 0 is the highest-priority class throughout (handover calls in the
/// two-class schemes).

#include <span>
#include <vector>

namespace cacwb {

struct AdmissionProfile {
    int channels = 0;
    /// accept[k][i]: probability that a class-k arrival is admitted when i
    /// channels are busy, for i in 0..channels-1.
    std::vector<std::vector<double>> accept;

    int num_classes() const { return static_cast<int>(accept.size()); }

    /// True when every class's acceptance vector is nonincreasing in the
    /// occupancy (monotone thinning). All built-in schemes satisfy this;
    /// hand-written profiles that do not are flagged, never rejected.
    bool is_monotone() const;

    /// Throws ValidationError on out-of-range probabilities or bad shape.
    void validate() const;
};

struct StationaryDistribution {
    std::vector<double> p; // occupancy probabilities, size channels+1

    int channels() const { return static_cast<int>(p.size()) - 1; }
};

struct MetricsReport {
    std::vector<double> blocking;   // per class
    double dropping = 0.0;          // P(C)
    double utilization = 0.0;       // carried load per channel
    double overall_blocking = 0.0;  // traffic-weighted blocking
    double carried_load = 0.0;      // erlangs
    double mean_occupancy = 0.0;    // channels
};

/// Solves the chain: p[i] proportional to prod_{j<i} Lambda(j)/((j+1)*mu),
/// with running rescale so loads far beyond double range still normalize.
/// All-zero rates give the point mass at state 0. Throws SolverError when
/// mu <= 0 or any rate is negative/non-finite.
StationaryDistribution stationary_distribution(const AdmissionProfile& profile,
                                               std::span<const double> rates,
                                               double mu);

/// PB_k = sum_{i<C} (1 - a[k][i]) p[i] + p[C]. State C always blocks.
double blocking_probability(const StationaryDistribution& dist,
                            const AdmissionProfile& profile, int class_index);

/// P_D = p[C], the full-system probability.
double dropping_probability(const StationaryDistribution& dist);

/// Splits blocking_probability(class_index) by occupancy band. band_edges
/// are interior cut points (strictly increasing, in 1..C); the bands are
/// [0,e1), [e1,e2), ..., [e_last, C]. Contributions sum to the total
/// blocking exactly. Empty edges give the single band [0, C].
std::vector<double> band_blocking_decomposition(const StationaryDistribution& dist,
                                                const AdmissionProfile& profile,
                                                int class_index,
                                                std::span<const int> band_edges);

/// U = sum_k lambda_k (1 - PB_k) / (mu * C).
double channel_utilization(std::span<const double> rates,
                           std::span<const double> blocking, double mu,
                           int channels);

/// 1 - sum_k lambda_k (1 - PB_k) / sum_k lambda_k. Throws SolverError when
/// the total arrival rate is zero.
double overall_blocking(std::span<const double> rates,
                        std::span<const double> blocking);

/// Bundles all scalar metrics for a solved chain. overall_blocking is 0
/// when the total rate is zero (empty system).
MetricsReport compute_metrics(const StationaryDistribution& dist,
                              const AdmissionProfile& profile,
                              std::span<const double> rates, double mu);

} // namespace cacwb

#endif
