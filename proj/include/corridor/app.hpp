#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corridor/demand.hpp"
#include "corridor/io.hpp"
#include "corridor/siting.hpp"
#include "corridor/sizing.hpp"

namespace corridor::app {

struct RasterSpec {
  geo::RegionGrid grid;
};

struct TripSource {
  std::optional<std::string> trips_csv;
  // Synthetic sampling inputs (used when trips_csv is absent).
  std::optional<std::string> od_csv;
  std::size_t sample_n = 0;
  int day_count = 1;
  std::optional<std::string> histogram_json;
  std::string vehicle_class_id;
};

struct SizingConfig {
  sizing::EquipmentClass equipment;
  double utilization_target = 0.5;
  double horizon_min = 10080.0;
};

struct ScenarioConfig {
  std::string config_dir;  // directory of the config file; relative paths resolve here
  std::string routes_csv;
  std::optional<std::string> sites_csv;
  std::optional<std::string> sites_geojson;
  std::optional<RasterSpec> raster;
  double candidate_radius_mi = 5.0;
  std::string vehicle_classes_json;
  TripSource trips;
  demand::AdoptionSpec adoption;
  siting::GaConfig ga;
  std::optional<SizingConfig> sizing;
  std::optional<std::string> pathways_json;
  double impact_vmt_per_year = 0.0;
  std::vector<int> curve_k_values;
  std::vector<double> rollout_fractions;
  double speed_mph = 50.0;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

// Parses and cross-validates the config. On failure throws InvalidConfig;
// `diagnostics` (when given) receives every violation as a
// JSON-pointer-style path plus message.
ScenarioConfig load_config(const std::string& path,
                           std::vector<std::string>* diagnostics = nullptr);

// Fully loaded scenario inputs, shared by the subcommands.
struct LoadedScenario {
  siting::Scenario scenario;
  std::string energy_unit;  // unit of the first trip's vehicle class
};

LoadedScenario load_scenario(const ScenarioConfig& cfg);

struct RunOptions {
  std::string mask = "all";  // all | none | <hex>
  bool exact = false;
  int workers = 1;
};

// Runs one subcommand, writes its outputs plus run_manifest.json under
// cfg.out_dir. Valid names: candidates, simulate, optimize, curve, size,
// impact, roadmap.
void run_subcommand(const std::string& name, const ScenarioConfig& cfg, const RunOptions& opts);

std::string sha256_file(const std::string& path);
std::string sha256_string(const std::string& data);

}  // namespace corridor::app
