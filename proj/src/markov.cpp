#include "cacwb/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cacwb/errors.hpp"

namespace cacwb {

bool AdmissionProfile::is_monotone() const {
    for (const auto& row : accept) {
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (row[i] > row[i - 1]) return false;
        }
    }
    return true;
}

void AdmissionProfile::validate() const {
    if (channels < 1) throw ValidationError("profile: channels must be >= 1");
    if (accept.empty()) throw ValidationError("profile: at least one class required");
    for (std::size_t k = 0; k < accept.size(); ++k) {
        if (static_cast<int>(accept[k].size()) != channels) {
            throw ValidationError("profile: class " + std::to_string(k + 1) +
                                  " acceptance vector has wrong length");
        }
        for (double a : accept[k]) {
            if (!(a >= 0.0 && a <= 1.0)) {
                throw ValidationError("profile: acceptance probabilities must lie in [0,1]");
            }
        }
    }
}

namespace {

void check_rates(const AdmissionProfile& profile, std::span<const double> rates,
                 double mu) {
    profile.validate();
    if (static_cast<int>(rates.size()) != profile.num_classes()) {
        throw ValidationError("rates: expected " + std::to_string(profile.num_classes()) +
                              " per-class arrival rates, got " + std::to_string(rates.size()));
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw SolverError("mu must be positive and finite");
    }
    for (double r : rates) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw SolverError("arrival rates must be nonnegative and finite");
        }
    }
}

} // namespace

StationaryDistribution stationary_distribution(const AdmissionProfile& profile,
                                               std::span<const double> rates,
                                               double mu) {
    check_rates(profile, rates, mu);
    const int C = profile.channels;
    const int m = profile.num_classes();

    // Unnormalized weights with a running rescale: dividing every
    // accumulated weight by the running maximum keeps the products in
    // range for loads that would otherwise overflow (C up to a few
    // thousand needs nothing fancier).
    std::vector<double> w(static_cast<std::size_t>(C) + 1, 0.0);
    w[0] = 1.0;
    double wmax = 1.0;
    for (int i = 0; i < C; ++i) {
        double lam = 0.0;
        for (int k = 0; k < m; ++k) lam += profile.accept[k][i] * rates[k];
        w[i + 1] = w[i] * (lam / ((i + 1) * mu));
        wmax = std::max(wmax, w[i + 1]);
        if (wmax > 1e150) {
            for (int j = 0; j <= i + 1; ++j) w[j] /= wmax;
            wmax = 1.0;
        }
    }

    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    StationaryDistribution dist;
    dist.p.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) dist.p[i] = w[i] / total;
    return dist;
}

double blocking_probability(const StationaryDistribution& dist,
                            const AdmissionProfile& profile, int class_index) {
    const int C = dist.channels();
    if (C != profile.channels) {
        throw ValidationError("blocking_probability: distribution and profile disagree on channel count");
    }
    if (class_index < 0 || class_index >= profile.num_classes()) {
        throw ValidationError("blocking_probability: class index out of range");
    }
    double pb = dist.p[C];
    for (int i = 0; i < C; ++i) {
        pb += (1.0 - profile.accept[class_index][i]) * dist.p[i];
    }
    return pb;
}

double dropping_probability(const StationaryDistribution& dist) {
    return dist.p[dist.channels()];
}

std::vector<double> band_blocking_decomposition(const StationaryDistribution& dist,
                                                const AdmissionProfile& profile,
                                                int class_index,
                                                std::span<const int> band_edges) {
    const int C = dist.channels();
    if (C != profile.channels) {
        throw ValidationError("band decomposition: distribution and profile disagree on channel count");
    }
    if (class_index < 0 || class_index >= profile.num_classes()) {
        throw ValidationError("band decomposition: class index out of range");
    }
    int prev = 0;
    for (int e : band_edges) {
        if (e <= prev || e > C) {
            throw ValidationError("band decomposition: edges must be strictly increasing within 1..C");
        }
        prev = e;
    }

    std::vector<double> contributions;
    contributions.reserve(band_edges.size() + 1);
    const auto& a = profile.accept[class_index];
    std::size_t edge = 0;
    double acc = 0.0;
    for (int i = 0; i <= C; ++i) {
        if (edge < band_edges.size() && i == band_edges[edge]) {
            contributions.push_back(acc);
            acc = 0.0;
            ++edge;
        }
        acc += (i == C ? 1.0 : 1.0 - a[i]) * dist.p[i];
    }
    contributions.push_back(acc);
    return contributions;
}

double channel_utilization(std::span<const double> rates,
                           std::span<const double> blocking, double mu,
                           int channels) {
    if (rates.size() != blocking.size()) {
        throw ValidationError("channel_utilization: rates and blocking lengths differ");
    }
    double carried = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        carried += rates[k] * (1.0 - blocking[k]);
    }
    return carried / (mu * channels);
}

double overall_blocking(std::span<const double> rates,
                        std::span<const double> blocking) {
    if (rates.size() != blocking.size()) {
        throw ValidationError("overall_blocking: rates and blocking lengths differ");
    }
    double total = 0.0;
    double carried = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        total += rates[k];
        carried += rates[k] * (1.0 - blocking[k]);
    }
    if (total <= 0.0) throw SolverError("overall_blocking: total arrival rate is zero");
    return 1.0 - carried / total;
}

MetricsReport compute_metrics(const StationaryDistribution& dist,
                              const AdmissionProfile& profile,
                              std::span<const double> rates, double mu) {
    MetricsReport metrics;
    const int m = profile.num_classes();
    metrics.blocking.resize(m);
    for (int k = 0; k < m; ++k) {
        metrics.blocking[k] = blocking_probability(dist, profile, k);
    }
    metrics.dropping = dropping_probability(dist);

    double total = 0.0;
    double carried = 0.0;
    for (int k = 0; k < m; ++k) {
        total += rates[k];
        carried += rates[k] * (1.0 - metrics.blocking[k]);
    }
    metrics.carried_load = carried / mu;
    metrics.utilization = carried / (mu * profile.channels);
    metrics.overall_blocking = total > 0.0 ? 1.0 - carried / total : 0.0;
    for (int i = 0; i <= dist.channels(); ++i) {
        metrics.mean_occupancy += i * dist.p[i];
    }
    return metrics;
}

} // namespace cacwb
