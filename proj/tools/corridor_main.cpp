#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corridor/app.hpp"
#include "corridor/errors.hpp"

using corridor::app::RunOptions;
using corridor::app::ScenarioConfig;

namespace {

void emit_error(const corridor::Error& e) {
  nlohmann::ordered_json j = {{"error", e.what()},
                              {"code", corridor::error_code_name(e.code())}};
  std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corridor zero-emission refueling infrastructure planner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string mask = "all";
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  int workers = 1;
  bool exact = false;

  app.add_option("--config", config_path, "scenario config JSON")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t s) { seed_override = s; seed_set = true; },
         "seed override");
  app.add_option("--workers", workers, "parallel workers")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "validate the config and exit");
  auto* candidates = app.add_subcommand("candidates", "filter/raster candidate sites");
  auto* simulate = app.add_subcommand("simulate", "simulate the fleet under a station mask");
  simulate->add_option("--mask", mask, "all | none | hex mask");
  auto* optimize = app.add_subcommand("optimize", "select a minimal station set");
  optimize->add_flag("--exact", exact, "exhaustive search (<= 20 candidates)");
  auto* curve = app.add_subcommand("curve", "completion-rate curve under cardinality caps");
  auto* size = app.add_subcommand("size", "dispenser/charger counts from a simulated ledger");
  auto* impact = app.add_subcommand("impact", "CO2 pathways and refuel-rate comparison");
  auto* roadmap = app.add_subcommand("roadmap", "multi-year nested rollout");

  CLI11_PARSE(app, argc, argv);

  std::vector<std::string> diagnostics;
  ScenarioConfig cfg;
  try {
    cfg = corridor::app::load_config(config_path, &diagnostics);
  } catch (const corridor::Error& e) {
    std::cerr << e.what() << std::endl;
    return 2;
  }
  if (validate->parsed()) {
    std::cout << "ok: " << config_path << std::endl;
    return 0;
  }

  if (seed_set) cfg.seed = seed_override;
  if (!out_dir.empty()) cfg.out_dir = out_dir;

  RunOptions opts;
  opts.mask = mask;
  opts.exact = exact;
  opts.workers = workers;

  std::string name;
  for (auto* sub : {candidates, simulate, optimize, curve, size, impact, roadmap}) {
    if (sub->parsed()) name = sub->get_name();
  }

  try {
    corridor::app::run_subcommand(name, cfg, opts);
  } catch (const corridor::Error& e) {
    emit_error(e);
    return 1;
  } catch (const std::exception& e) {
    emit_error(corridor::Error(corridor::ErrorCode::IoError, e.what()));
    return 1;
  }
  return 0;
}
