#ifndef CACWB_JSON_IO_HPP
#define CACWB_JSON_IO_HPP

/// JSON conversions for the public value types. nlohmann::json with the
/// default (lexicographically ordered) object type, so dumps are
/// byte-stable.

#include <json.hpp>

#include "cacwb/des.hpp"
#include "cacwb/markov.hpp"
#include "cacwb/optimizer.hpp"
#include "cacwb/policy.hpp"
#include "cacwb/traffic.hpp"

namespace cacwb {

nlohmann::json to_json(const MetricsReport& metrics);
MetricsReport metrics_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PolicySpec& spec);

nlohmann::json to_json(const FixedPointReport& report);

nlohmann::json to_json(const SimReport& report);

nlohmann::json to_json(const OptimizationResult& result);
OptimizationResult optimization_result_from_json(const nlohmann::json& j);

} // namespace cacwb

#endif
