#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dcsim/scenario.hpp"

namespace dcsim {

/// Parses and validates; every failure surfaces as ValidationError.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace dcsim
