#pragma once

#include <string>
#include <string_view>

#include "toalift/bench.hpp"
#include "toalift/scenario.hpp"
#include "toalift/stationarity.hpp"

namespace toalift {

// Parsers throw ConfigError on malformed or inconsistent input.

/// {"stations": [[..], ..], "ground_truth": [..]}. Distances are never stored;
/// a "distances" key on input is ignored.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(std::string_view text);

/// Generator and campaign configs share one flat object:
///   {"dim", "n_stations", "cube_side", "min_normalized_sv", "gate_measure",
///    "seed", "trials", "kinds", "threads", "audit_saddles", "solver": {...}}
/// Missing keys keep their defaults; unknown keys are rejected.
GeneratorConfig generator_config_from_json(std::string_view text);
CampaignConfig campaign_config_from_json(std::string_view text);
SolverSettings solver_settings_from_json(std::string_view text);

/// {"x_g", "s1", "s2", "b_values"}
PlantedExampleConfig planted_config_from_json(std::string_view text);

std::string result_to_json(ObjectiveKind kind, const Scenario& scenario, const OptimizationResult& result);
std::string report_to_json(ObjectiveKind kind, const StationaryReport& report);

std::string read_text_file(const std::string& path);

}  // namespace toalift
