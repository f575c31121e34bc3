#ifndef CACWB_DES_HPP
#define CACWB_DES_HPP

/// Seeded discrete-event simulation of the single-cell loss system; the
/// independent oracle for the analytic chain.
///
/// Per-class Poisson arrivals, exponential holding times (a single rate, or
/// the minimum of call-duration and dwell exponentials), blocked calls
/// cleared. Each class's arrival stream, the admission draws, and the
/// holding times use separate seeded generators so runs are reproducible
/// event for event.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cacwb/policy.hpp"

namespace cacwb {

struct SimConfig {
    PolicySpec policy;
    std::vector<double> rates; // per class, calls/s

    // Holding time: min(Exp(mu_a), Exp(eta)) when split_holding, else Exp(mu).
    double mu = 0.0;
    double mu_a = 0.0;
    double eta = 0.0;
    bool split_holding = false;

    std::int64_t total_arrivals = 1'000'000;
    double warmup_fraction = 0.1; // discarded arrivals, in [0, 0.5]
    int batches = 20;
    std::uint64_t seed = 0;

    void validate() const; // throws ValidationError
};

struct EstimateCI {
    double value = 0.0;
    double half_width = 0.0; // 95% Student-t over batch means

    bool covers(double x) const {
        return x >= value - half_width && x <= value + half_width;
    }
};

struct SimReport {
    std::vector<EstimateCI> blocking; // per class
    EstimateCI dropping;              // top-priority class blocking
    EstimateCI utilization;           // time-average occupancy / C
    std::vector<std::int64_t> arrivals; // per class, post-warmup
    std::vector<std::int64_t> accepted; // per class, post-warmup
    std::uint64_t seed = 0;
    std::uint64_t trace_digest = 0; // FNV-1a over every event record
};

/// Single admission decision: block at a full system, otherwise accept
/// iff u < a[k][occupancy].
bool admit(int class_index, int occupancy, const AdmissionProfile& profile, double u);

/// Runs the event loop. When trace is non-null, writes one CSV record per
/// event: time,kind,class,occupancy_after (kind in arrive-accept,
/// arrive-block, depart; class empty for departures).
SimReport simulate(const SimConfig& config, std::ostream* trace = nullptr);

} // namespace cacwb

#endif
