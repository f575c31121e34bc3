#ifndef CACWB_POLICY_HPP
#define CACWB_POLICY_HPP

/// Named admission schemes and their compilation into AdmissionProfiles.
///
/// Two-class schemes (class 0 = handover, class 1 = new calls): NPS, FGB,
/// FGC, LFC, UFC, UFB. Multiclass schemes (class 0 = highest priority):
/// MultiFGB, UBT. Thresholds follow the "occupancy < threshold => accept"
/// convention; the threshold state itself blocks.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cacwb/markov.hpp"

namespace cacwb {

/// Non-priority scheme: every class admitted whenever a channel is free.
struct Nps {
    int channels = 0;
    int classes = 2;
};

/// Fixed guard band: new calls admitted while occupancy < guard_start.
struct Fgb {
    int channels = 0;
    int guard_start = 0; // M
};

/// Fractional guard channel (thinning scheme I): new calls admitted with a
/// state-dependent probability alphas[i], nonincreasing from 1 to 0.
/// alphas has channels+1 entries; the last applies to the (always
/// blocking) full state and must be 0.
struct Fgc {
    int channels = 0;
    std::vector<double> alphas;
};

/// Limited fractional channel: thinning restricted to one state.
struct Lfc {
    int channels = 0;
    int thinned_state = 0; // M: open below, alpha at M, guard above
    double alpha = 0.0;
};

/// Uniform fractional channel: occupancy-independent thinning of new calls.
struct Ufc {
    int channels = 0;
    double alpha = 0.0;
};

/// Uniform fractional band: open below fractional_start (M), uniformly
/// thinned in [fractional_start, guard_start), handover-only above.
struct Ufb {
    int channels = 0;
    int fractional_start = 0; // M
    int guard_start = 0;      // N
    double alpha = 0.0;
};

/// Multiclass fixed guard bands: class k admitted while occupancy <
/// thresholds[k]. thresholds[0] = channels, nonincreasing.
struct MultiFgb {
    std::vector<int> thresholds;
};

/// Uniform band thinning: like MultiFgb, but class k (k >= 1) is admitted
/// in its forbidden band [thresholds[k], thresholds[k-1]) with the uniform
/// factor alphas[k-1].
struct Ubt {
    std::vector<int> thresholds;
    std::vector<double> alphas; // one per class 2..m
};

using PolicySpec = std::variant<Nps, Fgb, Fgc, Lfc, Ufc, Ufb, MultiFgb, Ubt>;

/// Throws ValidationError naming the violated constraint.
void validate(const PolicySpec& spec);

int num_channels(const PolicySpec& spec);
int num_classes(const PolicySpec& spec);
std::string scheme_name(const PolicySpec& spec);

/// Compiles a validated spec into the canonical acceptance matrix.
AdmissionProfile build_profile(const PolicySpec& spec);

/// Canonical equivalent when the policy degenerates into a simpler scheme
/// (UFB with alpha=0 is FGB, UBT with all-zero alphas is MultiFGB, ...).
std::optional<PolicySpec> reduction_check(const PolicySpec& spec);

struct PolicyEvaluation {
    PolicySpec spec;
    std::vector<double> rates;
    double mu = 0.0;
    StationaryDistribution distribution;
    MetricsReport metrics;
};

/// build_profile + stationary_distribution + compute_metrics in one step.
PolicyEvaluation evaluate_policy(const PolicySpec& spec,
                                 std::span<const double> rates, double mu);

} // namespace cacwb

#endif
