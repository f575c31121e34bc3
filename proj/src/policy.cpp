#include "cacwb/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cacwb/errors.hpp"

namespace cacwb {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

void check_alpha(double a, const std::string& who) {
    require(a >= 0.0 && a <= 1.0, who + ": alpha must lie in [0,1]");
}

void check_thresholds(const std::vector<int>& t, int channels, const std::string& who) {
    require(!t.empty(), who + ": at least one threshold required");
    require(t.front() == channels, who + ": thresholds[0] must equal the channel count");
    for (std::size_t k = 1; k < t.size(); ++k) {
        require(t[k] <= t[k - 1], who + ": thresholds must be nonincreasing");
        require(t[k] >= 0, who + ": thresholds must be nonnegative");
    }
}

} // namespace

void validate(const PolicySpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Nps>) {
                require(s.channels >= 1, "nps: channels must be >= 1");
                require(s.classes >= 1, "nps: classes must be >= 1");
            } else if constexpr (std::is_same_v<T, Fgb>) {
                require(s.channels >= 1, "fgb: channels must be >= 1");
                require(s.guard_start >= 0 && s.guard_start <= s.channels,
                        "fgb: guard_start must lie in [0, channels]");
            } else if constexpr (std::is_same_v<T, Fgc>) {
                require(s.channels >= 1, "fgc: channels must be >= 1");
                require(static_cast<int>(s.alphas.size()) == s.channels + 1,
                        "fgc: alphas must have channels+1 entries");
                require(s.alphas.front() == 1.0, "fgc: alphas[0] must be 1");
                require(s.alphas.back() == 0.0, "fgc: alphas[C] must be 0");
                for (std::size_t i = 0; i < s.alphas.size(); ++i) {
                    require(s.alphas[i] >= 0.0 && s.alphas[i] <= 1.0,
                            "fgc: alphas must lie in [0,1]");
                    if (i > 0) {
                        require(s.alphas[i] <= s.alphas[i - 1],
                                "fgc: alphas must be nonincreasing");
                    }
                }
            } else if constexpr (std::is_same_v<T, Lfc>) {
                require(s.channels >= 1, "lfc: channels must be >= 1");
                require(s.thinned_state >= 0 && s.thinned_state <= s.channels,
                        "lfc: thinned_state must lie in [0, channels]");
                check_alpha(s.alpha, "lfc");
            } else if constexpr (std::is_same_v<T, Ufc>) {
                require(s.channels >= 1, "ufc: channels must be >= 1");
                check_alpha(s.alpha, "ufc");
            } else if constexpr (std::is_same_v<T, Ufb>) {
                require(s.channels >= 1, "ufb: channels must be >= 1");
                require(s.fractional_start >= 0, "ufb: fractional_start must be >= 0");
                require(s.fractional_start <= s.guard_start,
                        "ufb: fractional_start must be <= guard_start");
                require(s.guard_start <= s.channels,
                        "ufb: guard_start must be <= channels");
                check_alpha(s.alpha, "ufb");
            } else if constexpr (std::is_same_v<T, MultiFgb>) {
                require(!s.thresholds.empty(), "multi-fgb: thresholds required");
                check_thresholds(s.thresholds, s.thresholds.front(), "multi-fgb");
                require(s.thresholds.front() >= 1, "multi-fgb: channels must be >= 1");
            } else if constexpr (std::is_same_v<T, Ubt>) {
                require(!s.thresholds.empty(), "ubt: thresholds required");
                check_thresholds(s.thresholds, s.thresholds.front(), "ubt");
                require(s.thresholds.front() >= 1, "ubt: channels must be >= 1");
                require(s.alphas.size() + 1 == s.thresholds.size(),
                        "ubt: need one alpha per class beyond the first");
                for (double a : s.alphas) check_alpha(a, "ubt");
            }
        },
        spec);
}

int num_channels(const PolicySpec& spec) {
    return std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, MultiFgb> || std::is_same_v<T, Ubt>) {
                return s.thresholds.empty() ? 0 : s.thresholds.front();
            } else {
                return s.channels;
            }
        },
        spec);
}

int num_classes(const PolicySpec& spec) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Nps>) {
                return s.classes;
            } else if constexpr (std::is_same_v<T, MultiFgb> || std::is_same_v<T, Ubt>) {
                return static_cast<int>(s.thresholds.size());
            } else {
                return 2;
            }
        },
        spec);
}

std::string scheme_name(const PolicySpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Nps>) return "nps";
            else if constexpr (std::is_same_v<T, Fgb>) return "fgb";
            else if constexpr (std::is_same_v<T, Fgc>) return "fgc";
            else if constexpr (std::is_same_v<T, Lfc>) return "lfc";
            else if constexpr (std::is_same_v<T, Ufc>) return "ufc";
            else if constexpr (std::is_same_v<T, Ufb>) return "ufb";
            else if constexpr (std::is_same_v<T, MultiFgb>) return "multi-fgb";
            else return "ubt";
        },
        spec);
}

AdmissionProfile build_profile(const PolicySpec& spec) {
    validate(spec);
    AdmissionProfile profile;
    profile.channels = num_channels(spec);
    const int C = profile.channels;

    auto open_row = [C]() { return std::vector<double>(C, 1.0); };

    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Nps>) {
                profile.accept.assign(s.classes, open_row());
            } else if constexpr (std::is_same_v<T, Fgb>) {
                profile.accept.push_back(open_row());
                std::vector<double> row(C, 0.0);
                std::fill(row.begin(), row.begin() + s.guard_start, 1.0);
                profile.accept.push_back(std::move(row));
            } else if constexpr (std::is_same_v<T, Fgc>) {
                profile.accept.push_back(open_row());
                profile.accept.emplace_back(s.alphas.begin(), s.alphas.begin() + C);
            } else if constexpr (std::is_same_v<T, Lfc>) {
                profile.accept.push_back(open_row());
                std::vector<double> row(C, 0.0);
                std::fill(row.begin(), row.begin() + s.thinned_state, 1.0);
                if (s.thinned_state < C) row[s.thinned_state] = s.alpha;
                profile.accept.push_back(std::move(row));
            } else if constexpr (std::is_same_v<T, Ufc>) {
                profile.accept.push_back(open_row());
                profile.accept.emplace_back(C, s.alpha);
            } else if constexpr (std::is_same_v<T, Ufb>) {
                profile.accept.push_back(open_row());
                std::vector<double> row(C, 0.0);
                for (int i = 0; i < C; ++i) {
                    if (i < s.fractional_start) row[i] = 1.0;
                    else if (i < s.guard_start) row[i] = s.alpha;
                }
                profile.accept.push_back(std::move(row));
            } else if constexpr (std::is_same_v<T, MultiFgb>) {
                for (int t : s.thresholds) {
                    std::vector<double> row(C, 0.0);
                    std::fill(row.begin(), row.begin() + t, 1.0);
                    profile.accept.push_back(std::move(row));
                }
            } else if constexpr (std::is_same_v<T, Ubt>) {
                profile.accept.push_back(open_row());
                for (std::size_t k = 1; k < s.thresholds.size(); ++k) {
                    std::vector<double> row(C, 0.0);
                    const int lo = s.thresholds[k];
                    const int hi = s.thresholds[k - 1];
                    for (int i = 0; i < C; ++i) {
                        if (i < lo) row[i] = 1.0;
                        else if (i < hi) row[i] = s.alphas[k - 1];
                    }
                    profile.accept.push_back(std::move(row));
                }
            }
        },
        spec);
    return profile;
}

std::optional<PolicySpec> reduction_check(const PolicySpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& s) -> std::optional<PolicySpec> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ufb>) {
                if (s.alpha == 0.0 || s.fractional_start == s.guard_start) {
                    return PolicySpec{Fgb{s.channels, s.fractional_start}};
                }
                if (s.alpha == 1.0) {
                    return PolicySpec{Fgb{s.channels, s.guard_start}};
                }
            } else if constexpr (std::is_same_v<T, Ufc>) {
                if (s.alpha == 1.0) return PolicySpec{Nps{s.channels, 2}};
            } else if constexpr (std::is_same_v<T, Lfc>) {
                if (s.alpha == 0.0) return PolicySpec{Fgb{s.channels, s.thinned_state}};
                if (s.alpha == 1.0 && s.thinned_state < s.channels) {
                    return PolicySpec{Fgb{s.channels, s.thinned_state + 1}};
                }
                if (s.alpha == 1.0) return PolicySpec{Fgb{s.channels, s.channels}};
            } else if constexpr (std::is_same_v<T, Ubt>) {
                if (std::all_of(s.alphas.begin(), s.alphas.end(),
                                [](double a) { return a == 0.0; })) {
                    return PolicySpec{MultiFgb{s.thresholds}};
                }
            }
            return std::nullopt;
        },
        spec);
}

PolicyEvaluation evaluate_policy(const PolicySpec& spec,
                                 std::span<const double> rates, double mu) {
    PolicyEvaluation eval;
    eval.spec = spec;
    eval.rates.assign(rates.begin(), rates.end());
    eval.mu = mu;
    const AdmissionProfile profile = build_profile(spec);
    eval.distribution = stationary_distribution(profile, rates, mu);
    eval.metrics = compute_metrics(eval.distribution, profile, rates, mu);
    return eval;
}

} // namespace cacwb
