#include "cacwb/des.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "cacwb/errors.hpp"
#include "cacwb/text.hpp"

namespace cacwb {

void SimConfig::validate() const {
    cacwb::validate(policy);
    if (static_cast<int>(rates.size()) != num_classes(policy)) {
        throw ValidationError("sim: rates length must match the policy class count");
    }
    for (double r : rates) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw ValidationError("sim: rates must be nonnegative and finite");
        }
    }
    if (split_holding) {
        if (!(mu_a >= 0.0) || !(eta >= 0.0) || mu_a + eta <= 0.0) {
            throw ValidationError("sim: split holding needs mu_a + eta > 0");
        }
    } else if (!(mu > 0.0)) {
        throw ValidationError("sim: mu must be positive");
    }
    if (batches < 2) throw ValidationError("sim: at least 2 batches required");
    if (!(warmup_fraction >= 0.0 && warmup_fraction <= 0.5)) {
        throw ValidationError("sim: warmup_fraction must lie in [0, 0.5]");
    }
    if (total_arrivals < static_cast<std::int64_t>(batches) * 100) {
        throw ValidationError("sim: total_arrivals must be >= batches * 100");
    }
}

bool admit(int class_index, int occupancy, const AdmissionProfile& profile, double u) {
    if (occupancy >= profile.channels) return false;
    return u < profile.accept[class_index][occupancy];
}

namespace {

// One splitmix64 step; used only to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(mix64(seed ^ mix64(stream)));
}

struct Fnv1a {
    std::uint64_t hash = 0xcbf29ce484222325ULL;

    void feed(const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            hash ^= bytes[i];
            hash *= 0x100000001b3ULL;
        }
    }
    void feed_double(double x) { feed(&x, sizeof x); }
    void feed_int(std::int64_t x) { feed(&x, sizeof x); }
};

double student_t_975(int dof) {
    boost::math::students_t_distribution<double> dist(dof);
    return boost::math::quantile(dist, 0.975);
}

EstimateCI from_batches(const std::vector<double>& stats, double tq) {
    const int n = static_cast<int>(stats.size());
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : stats) var += (s - mean) * (s - mean);
    var /= (n - 1);
    EstimateCI ci;
    ci.value = mean;
    ci.half_width = tq * std::sqrt(var / n);
    return ci;
}

} // namespace

SimReport simulate(const SimConfig& config, std::ostream* trace) {
    config.validate();
    const AdmissionProfile profile = build_profile(config.policy);
    const int m = profile.num_classes();
    const int C = profile.channels;

    SimReport report;
    report.seed = config.seed;
    report.blocking.resize(m);
    report.arrivals.assign(m, 0);
    report.accepted.assign(m, 0);

    const bool any_arrivals =
        std::any_of(config.rates.begin(), config.rates.end(),
                    [](double r) { return r > 0.0; });
    if (!any_arrivals) return report; // nothing ever happens

    std::vector<std::mt19937_64> arrival_rng;
    arrival_rng.reserve(m);
    for (int k = 0; k < m; ++k) arrival_rng.push_back(stream_rng(config.seed, 100 + k));
    std::mt19937_64 admit_rng = stream_rng(config.seed, 1);
    std::mt19937_64 holding_rng = stream_rng(config.seed, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto sample_holding = [&]() {
        if (config.split_holding) {
            double h = std::numeric_limits<double>::infinity();
            if (config.mu_a > 0.0) {
                h = std::exponential_distribution<double>(config.mu_a)(holding_rng);
            }
            if (config.eta > 0.0) {
                h = std::min(h, std::exponential_distribution<double>(config.eta)(holding_rng));
            }
            return h;
        }
        return std::exponential_distribution<double>(config.mu)(holding_rng);
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> next_arrival(m, inf);
    for (int k = 0; k < m; ++k) {
        if (config.rates[k] > 0.0) {
            next_arrival[k] =
                std::exponential_distribution<double>(config.rates[k])(arrival_rng[k]);
        }
    }
    std::priority_queue<double, std::vector<double>, std::greater<>> departures;

    const std::int64_t total = config.total_arrivals;
    const std::int64_t warmup =
        static_cast<std::int64_t>(std::floor(config.warmup_fraction * total));
    const std::int64_t measured = total - warmup;
    const int batches = config.batches;

    // Per-batch tallies: blocked/seen per class and the occupancy-time
    // integral over the batch's time window (delimited by the arrivals
    // that open each batch).
    std::vector<std::vector<std::int64_t>> seen(batches, std::vector<std::int64_t>(m, 0));
    std::vector<std::vector<std::int64_t>> blocked(batches, std::vector<std::int64_t>(m, 0));
    std::vector<double> occ_integral(batches, 0.0);
    std::vector<double> window(batches, 0.0);

    int occupancy = 0;
    double now = 0.0;
    double window_start = 0.0;
    std::int64_t arrival_count = 0; // arrivals processed so far
    int current_batch = -1;         // -1 while warming up
    Fnv1a digest;

    auto emit = [&](char kind, int cls, double t) {
        digest.feed_double(t);
        digest.feed(&kind, 1);
        digest.feed_int(cls);
        digest.feed_int(occupancy);
        if (trace) {
            *trace << format_double(t) << ',';
            switch (kind) {
                case 'a': *trace << "arrive-accept,"; break;
                case 'b': *trace << "arrive-block,"; break;
                default: *trace << "depart,"; break;
            }
            if (cls >= 0) *trace << (cls + 1);
            *trace << ',' << occupancy << '\n';
        }
    };

    while (arrival_count < total) {
        int next_class = -1;
        double t_arrival = inf;
        for (int k = 0; k < m; ++k) {
            if (next_arrival[k] < t_arrival) {
                t_arrival = next_arrival[k];
                next_class = k;
            }
        }
        const double t_depart = departures.empty() ? inf : departures.top();

        if (t_depart <= t_arrival) {
            if (current_batch >= 0) {
                occ_integral[current_batch] += occupancy * (t_depart - now);
            }
            now = t_depart;
            departures.pop();
            --occupancy;
            if (occupancy < 0) throw SolverError("sim: occupancy went negative");
            emit('d', -1, now);
            continue;
        }

        // Arrival of next_class at t_arrival.
        const std::int64_t idx = arrival_count; // 0-based index of this arrival
        const int batch =
            idx < warmup ? -1
                         : static_cast<int>(((idx - warmup) * batches) / measured);
        if (batch != current_batch) {
            if (current_batch >= 0) {
                occ_integral[current_batch] += occupancy * (t_arrival - now);
                window[current_batch] = t_arrival - window_start;
            }
            window_start = t_arrival;
            current_batch = batch;
        } else if (current_batch >= 0) {
            occ_integral[current_batch] += occupancy * (t_arrival - now);
        }
        now = t_arrival;
        ++arrival_count;
        next_arrival[next_class] =
            now + std::exponential_distribution<double>(config.rates[next_class])(
                      arrival_rng[next_class]);

        const double u = unit(admit_rng);
        const bool accepted = admit(next_class, occupancy, profile, u);
        if (batch >= 0) {
            ++seen[batch][next_class];
            ++report.arrivals[next_class];
        }
        if (accepted) {
            ++occupancy;
            if (occupancy > C) throw SolverError("sim: occupancy exceeded the channel count");
            departures.push(now + sample_holding());
            if (batch >= 0) ++report.accepted[next_class];
            emit('a', next_class, now);
        } else {
            if (batch >= 0) ++blocked[batch][next_class];
            emit('b', next_class, now);
        }
    }
    if (current_batch >= 0) {
        window[current_batch] = now - window_start;
    }

    const double tq = student_t_975(batches - 1);
    std::vector<double> stats(batches);
    for (int k = 0; k < m; ++k) {
        for (int b = 0; b < batches; ++b) {
            stats[b] = seen[b][k] > 0
                           ? static_cast<double>(blocked[b][k]) / seen[b][k]
                           : 0.0;
        }
        report.blocking[k] = from_batches(stats, tq);
    }
    report.dropping = report.blocking[0];
    for (int b = 0; b < batches; ++b) {
        stats[b] = window[b] > 0.0 ? occ_integral[b] / (window[b] * C) : 0.0;
    }
    report.utilization = from_batches(stats, tq);
    report.trace_digest = digest.hash;
    return report;
}

} // namespace cacwb
