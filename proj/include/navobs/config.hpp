#pragma once

// Scenario documents: a JSON object of nested tables. Unknown keys are
// rejected, every error names the offending key path, and defaults are
// filled in so the echoed document is the complete effective config.

#include "navobs/scenario.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace navobs {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses and validates. Throws ConfigError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig config_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const ScenarioConfig& cfg);
/// Pretty-printed effective config; parse_config(dump_config(c)) == c.
std::string dump_config(const ScenarioConfig& cfg);

std::vector<std::string> preset_names();
/// Accepts names with or without the "scenario_" prefix. Throws ConfigError
/// for unknown names.
ScenarioConfig preset(std::string_view name);

}  // namespace navobs
