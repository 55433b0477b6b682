#pragma once

#include <json.hpp>

#include "pivotal/segmentation.hpp"
#include "pivotal/sim.hpp"
#include "pivotal/types.hpp"

namespace pivotal {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

Json to_json(const FitResult& fit);
Json to_json(const EstimatorPath& path);
Json to_json(const SelectionReport& report);
Json to_json(const Segmentation& seg);
Json to_json(const SimConfig& config);
Json to_json(const MetricsReport& report);

EstimatorPath path_from_json(const Json& j);
SimConfig sim_config_from_json(const Json& j);

/// Wrap a payload with the schema version and the resolved configuration.
Json artifact(const std::string& kind, Json config, Json payload);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace pivotal
