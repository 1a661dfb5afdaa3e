#include "corridor/app.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "corridor/errors.hpp"
#include "corridor/impact.hpp"

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace corridor::app {

namespace {

std::string resolve(const std::string& dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(dir) / p).string();
}

class Validator {
 public:
  explicit Validator(std::vector<std::string>* sink) : sink_(sink) {}

  void add(const std::string& pointer, const std::string& message) {
    issues_.push_back(pointer + ": " + message);
    if (sink_) sink_->push_back(issues_.back());
  }

  void require_file(const std::string& pointer, const std::string& path) {
    if (!fs::exists(path)) add(pointer, "file not found: " + path);
  }

  void finish(const std::string& config_path) const {
    if (issues_.empty()) return;
    std::ostringstream os;
    os << config_path << " has " << issues_.size() << " problem(s):";
    for (const auto& i : issues_) os << "\n  " << i;
    throw Error(ErrorCode::InvalidConfig, os.str());
  }

 private:
  std::vector<std::string>* sink_;
  std::vector<std::string> issues_;
};

}  // namespace

ScenarioConfig load_config(const std::string& path, std::vector<std::string>* diagnostics) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }

  Validator v(diagnostics);
  ScenarioConfig cfg;
  cfg.config_dir = fs::path(path).parent_path().string();
  if (cfg.config_dir.empty()) cfg.config_dir = ".";

  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
    v.add("/seed", "required non-negative integer seed (wall-clock seeding is not allowed)");
  } else {
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  if (!j.contains("routes_csv")) {
    v.add("/routes_csv", "required");
  } else {
    cfg.routes_csv = resolve(cfg.config_dir, j["routes_csv"].get<std::string>());
    v.require_file("/routes_csv", cfg.routes_csv);
  }

  int site_sources = 0;
  if (j.contains("sites_csv")) {
    cfg.sites_csv = resolve(cfg.config_dir, j["sites_csv"].get<std::string>());
    v.require_file("/sites_csv", *cfg.sites_csv);
    ++site_sources;
  }
  if (j.contains("sites_geojson")) {
    cfg.sites_geojson = resolve(cfg.config_dir, j["sites_geojson"].get<std::string>());
    v.require_file("/sites_geojson", *cfg.sites_geojson);
    ++site_sources;
  }
  if (j.contains("raster")) {
    const auto& r = j["raster"];
    RasterSpec rs;
    rs.grid.lat_min = r.value("lat_min", 0.0);
    rs.grid.lat_max = r.value("lat_max", 0.0);
    rs.grid.lon_min = r.value("lon_min", 0.0);
    rs.grid.lon_max = r.value("lon_max", 0.0);
    rs.grid.d_lat = r.value("d_lat", 0.0);
    rs.grid.d_lon = r.value("d_lon", 0.0);
    if (!(rs.grid.lat_min < rs.grid.lat_max) || !(rs.grid.lon_min < rs.grid.lon_max) ||
        !(rs.grid.d_lat > 0.0) || !(rs.grid.d_lon > 0.0)) {
      v.add("/raster", "invalid grid bounds or steps");
    }
    cfg.raster = rs;
    ++site_sources;
  }
  if (site_sources != 1) {
    v.add("/sites", "exactly one of sites_csv, sites_geojson, raster is required");
  }

  cfg.candidate_radius_mi = j.value("candidate_radius_mi", 5.0);
  if (!(cfg.candidate_radius_mi > 0.0)) v.add("/candidate_radius_mi", "must be > 0");

  if (!j.contains("vehicle_classes_json")) {
    v.add("/vehicle_classes_json", "required");
  } else {
    cfg.vehicle_classes_json = resolve(cfg.config_dir, j["vehicle_classes_json"].get<std::string>());
    v.require_file("/vehicle_classes_json", cfg.vehicle_classes_json);
  }

  if (!j.contains("trips")) {
    v.add("/trips", "required");
  } else {
    const auto& t = j["trips"];
    if (t.contains("csv")) {
      cfg.trips.trips_csv = resolve(cfg.config_dir, t["csv"].get<std::string>());
      v.require_file("/trips/csv", *cfg.trips.trips_csv);
    } else if (t.contains("od_csv")) {
      cfg.trips.od_csv = resolve(cfg.config_dir, t["od_csv"].get<std::string>());
      v.require_file("/trips/od_csv", *cfg.trips.od_csv);
      cfg.trips.sample_n = t.value("n", 0);
      cfg.trips.day_count = t.value("day_count", 1);
      if (cfg.trips.day_count < 1) v.add("/trips/day_count", "must be >= 1");
      if (t.contains("histogram_json")) {
        cfg.trips.histogram_json = resolve(cfg.config_dir, t["histogram_json"].get<std::string>());
        v.require_file("/trips/histogram_json", *cfg.trips.histogram_json);
      }
      if (!t.contains("vehicle_class_id")) {
        v.add("/trips/vehicle_class_id", "required for sampled trips");
      } else {
        cfg.trips.vehicle_class_id = t["vehicle_class_id"].get<std::string>();
      }
    } else {
      v.add("/trips", "needs either csv or od_csv");
    }
  }

  if (j.contains("adoption")) {
    const auto& a = j["adoption"];
    cfg.adoption.fraction = a.value("fraction", 1.0);
    if (cfg.adoption.fraction < 0.0 || cfg.adoption.fraction > 1.0) {
      v.add("/adoption/fraction", "must be in [0,1]");
    }
    const std::string mode = a.value("mode", "deterministic");
    if (mode == "deterministic") {
      cfg.adoption.mode = demand::AdoptionMode::Deterministic;
    } else if (mode == "bernoulli") {
      cfg.adoption.mode = demand::AdoptionMode::Bernoulli;
    } else {
      v.add("/adoption/mode", "must be deterministic or bernoulli");
    }
  }

  if (j.contains("ga")) {
    const auto& g = j["ga"];
    cfg.ga.population = g.value("population", 200);
    cfg.ga.generations = g.value("generations", 500);
    cfg.ga.tournament_k = g.value("tournament_k", 3);
    cfg.ga.crossover_p = g.value("crossover_p", 0.9);
    cfg.ga.mutation_p = g.value("mutation_p", -1.0);
    cfg.ga.elitism = g.value("elitism", 2);
    cfg.ga.stall_limit = g.value("stall_limit", 50);
    if (cfg.ga.population < 2) v.add("/ga/population", "must be >= 2");
    if (cfg.ga.elitism >= cfg.ga.population) v.add("/ga/elitism", "must be < population");
    if (cfg.ga.tournament_k < 1) v.add("/ga/tournament_k", "must be >= 1");
    if (cfg.ga.crossover_p < 0.0 || cfg.ga.crossover_p > 1.0) v.add("/ga/crossover_p", "in [0,1]");
  }

  if (j.contains("sizing")) {
    const auto& s = j["sizing"];
    SizingConfig sc;
    try {
      sc.equipment.name = s.at("equipment").at("name").get<std::string>();
      sc.equipment.kind =
          sizing::equipment_kind_from_name(s.at("equipment").at("kind").get<std::string>());
      sc.equipment.rate = s.at("equipment").at("rate").get<double>();
    } catch (const std::exception& e) {
      v.add("/sizing/equipment", std::string("invalid: ") + e.what());
    }
    sc.utilization_target = s.value("utilization_target", 0.5);
    sc.horizon_min = s.value("horizon_min", 10080.0);
    if (!(sc.equipment.rate > 0.0)) v.add("/sizing/equipment/rate", "must be > 0");
    if (!(sc.utilization_target > 0.0) || sc.utilization_target > 1.0) {
      v.add("/sizing/utilization_target", "must be in (0,1]");
    }
    if (!(sc.horizon_min > 0.0)) v.add("/sizing/horizon_min", "must be > 0");
    cfg.sizing = sc;
  }

  if (j.contains("pathways_json")) {
    cfg.pathways_json = resolve(cfg.config_dir, j["pathways_json"].get<std::string>());
    v.require_file("/pathways_json", *cfg.pathways_json);
  }
  cfg.impact_vmt_per_year = j.value("impact_vmt_per_year", 0.0);

  if (j.contains("curve_k_values")) {
    cfg.curve_k_values = j["curve_k_values"].get<std::vector<int>>();
    for (std::size_t i = 0; i + 1 < cfg.curve_k_values.size(); ++i) {
      if (cfg.curve_k_values[i] <= cfg.curve_k_values[i + 1]) {
        v.add("/curve_k_values", "must be strictly descending");
        break;
      }
    }
  }
  if (j.contains("rollout_fractions")) {
    cfg.rollout_fractions = j["rollout_fractions"].get<std::vector<double>>();
    for (std::size_t i = 0; i + 1 < cfg.rollout_fractions.size(); ++i) {
      if (cfg.rollout_fractions[i + 1] < cfg.rollout_fractions[i]) {
        v.add("/rollout_fractions", "must be non-decreasing");
        break;
      }
    }
  }

  cfg.speed_mph = j.value("speed_mph", 50.0);
  if (!(cfg.speed_mph > 0.0)) v.add("/speed_mph", "must be > 0");
  cfg.out_dir = j.value("out_dir", "out");

  // Referential checks against the actual data files, when they parse.
  v.finish(path);
  try {
    load_scenario(cfg);
  } catch (const Error& e) {
    v.add("/", e.what());
  }
  v.finish(path);
  return cfg;
}

LoadedScenario load_scenario(const ScenarioConfig& cfg) {
  LoadedScenario out;
  out.scenario.routes = io::load_routes_csv(cfg.routes_csv);
  out.scenario.classes = io::load_vehicle_classes_json(cfg.vehicle_classes_json);
  out.scenario.speed_mph = cfg.speed_mph;

  std::vector<geo::CandidateSite> raw_sites;
  if (cfg.sites_csv) {
    raw_sites = io::load_sites_csv(*cfg.sites_csv);
  } else if (cfg.sites_geojson) {
    raw_sites = io::load_sites_geojson(*cfg.sites_geojson);
  } else if (cfg.raster) {
    raw_sites = geo::raster_candidates(cfg.raster->grid);
  }
  std::vector<geo::RouteProfile> route_list;
  for (const auto& [id, r] : out.scenario.routes) route_list.push_back(r);
  out.scenario.candidates =
      geo::filter_candidates(raw_sites, route_list, cfg.candidate_radius_mi);

  std::vector<demand::TripSpec> trips;
  if (cfg.trips.trips_csv) {
    trips = io::load_trips_csv(*cfg.trips.trips_csv, out.scenario.routes, out.scenario.classes);
  } else {
    const auto od = io::load_od_csv(*cfg.trips.od_csv, out.scenario.routes);
    const auto hist = cfg.trips.histogram_json
                          ? io::load_histogram_json(*cfg.trips.histogram_json)
                          : demand::DepartureHistogram::uniform_daytime();
    if (!out.scenario.classes.contains(cfg.trips.vehicle_class_id)) {
      throw Error(ErrorCode::UnknownVehicleClass,
                  "trips/vehicle_class_id '" + cfg.trips.vehicle_class_id + "' not registered");
    }
    trips = demand::sample_trips(od, cfg.trips.sample_n, hist, cfg.trips.day_count,
                                 cfg.trips.vehicle_class_id, cfg.seed);
  }
  demand::AdoptionSpec adoption = cfg.adoption;
  adoption.seed = cfg.seed;
  out.scenario.trips = demand::apply_adoption(trips, adoption);

  if (!out.scenario.trips.empty()) {
    out.energy_unit =
        out.scenario.classes.get(out.scenario.trips.front().vehicle_class_id).capacity_unit;
  }
  return out;
}

std::string sha256_string(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hexd = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hexd[digest[i] >> 4];
    out += hexd[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_string(buf.str());
}

namespace {

constexpr const char* kToolVersion = "1.0.0";

void write_manifest(const ScenarioConfig& cfg, const std::string& config_digest,
                    const std::vector<std::string>& outputs) {
  ordered_json inputs = ordered_json::object();
  auto add_input = [&](const std::string& p) {
    if (!p.empty() && fs::exists(p)) inputs[fs::path(p).filename().string()] = sha256_file(p);
  };
  add_input(cfg.routes_csv);
  if (cfg.sites_csv) add_input(*cfg.sites_csv);
  if (cfg.sites_geojson) add_input(*cfg.sites_geojson);
  add_input(cfg.vehicle_classes_json);
  if (cfg.trips.trips_csv) add_input(*cfg.trips.trips_csv);
  if (cfg.trips.od_csv) add_input(*cfg.trips.od_csv);
  if (cfg.trips.histogram_json) add_input(*cfg.trips.histogram_json);
  if (cfg.pathways_json) add_input(*cfg.pathways_json);

  ordered_json out_digests = ordered_json::object();
  for (const auto& o : outputs) {
    out_digests[fs::path(o).filename().string()] = sha256_file(o);
  }
  ordered_json j = {{"tool_version", kToolVersion},
                    {"config_sha256", config_digest},
                    {"seed", cfg.seed},
                    {"inputs", inputs},
                    {"outputs", out_digests}};
  std::ofstream out(fs::path(cfg.out_dir) / "run_manifest.json", std::ios::binary);
  out << j.dump(2) << "\n";
}

std::string config_digest(const ScenarioConfig& cfg) {
  // Digest of the semantic configuration (not the file bytes) so path style
  // does not matter; content digests of the inputs are recorded separately.
  std::ostringstream os;
  os << cfg.seed << "|" << cfg.speed_mph << "|" << cfg.candidate_radius_mi << "|"
     << cfg.adoption.fraction << "|" << static_cast<int>(cfg.adoption.mode) << "|"
     << cfg.ga.population << "," << cfg.ga.generations << "," << cfg.ga.tournament_k << ","
     << cfg.ga.crossover_p << "," << cfg.ga.mutation_p << "," << cfg.ga.elitism << ","
     << cfg.ga.stall_limit;
  return sha256_string(os.str());
}

std::string out_path(const ScenarioConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

siting::StationMask parse_mask(const std::string& text, std::size_t n) {
  if (text == "all") return siting::StationMask(n, 1);
  if (text == "none") return siting::StationMask(n, 0);
  return siting::mask_from_hex(text, n);
}

}  // namespace

void run_subcommand(const std::string& name, const ScenarioConfig& cfg, const RunOptions& opts) {
  fs::create_directories(cfg.out_dir);
  const std::string digest = config_digest(cfg);
  std::vector<std::string> outputs;
  LoadedScenario loaded = load_scenario(cfg);
  siting::Scenario& sc = loaded.scenario;

  if (name == "candidates") {
    const std::string p = out_path(cfg, "candidates.geojson");
    io::write_candidates_geojson(p, sc.candidates);
    outputs.push_back(p);
    const auto stats = demand::distance_stats(sc.trips, sc.routes);
    const std::string d = out_path(cfg, "distance_stats.json");
    io::write_distance_stats_json(d, stats);
    outputs.push_back(d);
  } else if (name == "simulate") {
    const auto mask = parse_mask(opts.mask, sc.candidates.size());
    const auto ledger =
        sim::simulate_fleet(sc.trips, sc.routes, sc.classes, mask, sc.candidates, sc.speed_mph);
    io::write_ledger_csv(out_path(cfg, "ledger.csv"), ledger, loaded.energy_unit);
    io::write_trip_results_csv(out_path(cfg, "trip_results.csv"), ledger);
    io::write_ledger_events_json(out_path(cfg, "ledger_events.json"), ledger);
    outputs = {out_path(cfg, "ledger.csv"), out_path(cfg, "trip_results.csv"),
               out_path(cfg, "ledger_events.json")};
  } else if (name == "optimize") {
    siting::GaConfig ga = cfg.ga;
    ga.seed = cfg.seed;
    const siting::SitingSolution sol =
        opts.exact ? siting::exhaustive_optimize(sc)
                   : siting::ga_optimize(sc, ga, nullptr, {}, opts.workers);
    io::write_solution_geojson(out_path(cfg, "solution.geojson"), sol, sc.candidates);
    io::write_solution_summary_json(out_path(cfg, "solution_summary.json"), sol, cfg.seed);
    io::write_ledger_csv(out_path(cfg, "ledger.csv"), sol.ledger, loaded.energy_unit);
    io::write_trip_results_csv(out_path(cfg, "trip_results.csv"), sol.ledger);
    io::write_ledger_events_json(out_path(cfg, "ledger_events.json"), sol.ledger);
    outputs = {out_path(cfg, "solution.geojson"), out_path(cfg, "solution_summary.json"),
               out_path(cfg, "ledger.csv"), out_path(cfg, "trip_results.csv"),
               out_path(cfg, "ledger_events.json")};
  } else if (name == "curve") {
    if (cfg.curve_k_values.empty()) {
      throw Error(ErrorCode::InvalidConfig, "curve requires curve_k_values in the config");
    }
    siting::GaConfig ga = cfg.ga;
    ga.seed = cfg.seed;
    const auto curve = siting::completion_curve(sc, ga, cfg.curve_k_values, opts.workers);
    io::write_curve_csv(out_path(cfg, "curve.csv"), curve);
    io::write_curve_survivors_csv(out_path(cfg, "curve_survivors.csv"), curve);
    outputs = {out_path(cfg, "curve.csv"), out_path(cfg, "curve_survivors.csv")};
  } else if (name == "size") {
    if (!cfg.sizing) {
      throw Error(ErrorCode::InvalidConfig, "size requires a sizing block in the config");
    }
    const std::string ledger_path = out_path(cfg, "ledger_events.json");
    if (!fs::exists(ledger_path)) {
      throw Error(ErrorCode::IoError,
                  "no ledger_events.json in " + cfg.out_dir + "; run simulate or optimize first");
    }
    const auto ledger = io::load_ledger_events_json(ledger_path);
    const auto report = sizing::size_network(ledger, cfg.sizing->equipment,
                                             cfg.sizing->utilization_target, cfg.sizing->horizon_min);
    io::write_sizing_csv(out_path(cfg, "sizing.csv"), report, loaded.energy_unit);
    outputs = {out_path(cfg, "sizing.csv")};
    if (cfg.sizing->equipment.kind == sizing::EquipmentKind::EvCharger) {
      const auto stats = sizing::charge_stats(ledger, sc.classes);
      io::write_charge_stats_csv(out_path(cfg, "charge_stats.csv"), stats);
      outputs.push_back(out_path(cfg, "charge_stats.csv"));
    }
  } else if (name == "impact") {
    if (!cfg.pathways_json) {
      throw Error(ErrorCode::InvalidConfig, "impact requires pathways_json in the config");
    }
    auto pcfg = io::load_pathways_json(*cfg.pathways_json);
    const auto report = impact::build_report(cfg.impact_vmt_per_year, pcfg.pathways);
    io::write_impact_csv(out_path(cfg, "impact.csv"), report);
    for (auto& row : pcfg.refuel_rates) {
      row.miles_per_min = impact::refuel_rate(row.replenish_per_min, row.economy_mi_per_unit);
    }
    io::write_refuel_rates_csv(out_path(cfg, "refuel_rates.csv"), pcfg.refuel_rates);
    outputs = {out_path(cfg, "impact.csv"), out_path(cfg, "refuel_rates.csv")};
  } else if (name == "roadmap") {
    if (cfg.rollout_fractions.empty()) {
      throw Error(ErrorCode::InvalidConfig, "roadmap requires rollout_fractions in the config");
    }
    siting::GaConfig ga = cfg.ga;
    ga.seed = cfg.seed;
    // The rollout draws each year's population from the full trip list.
    siting::Scenario base = sc;
    const auto years =
        siting::rollout(base, cfg.rollout_fractions, ga, cfg.adoption.mode, opts.workers);
    io::write_rollout_csv(out_path(cfg, "rollout.csv"), years);
    outputs = {out_path(cfg, "rollout.csv")};
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown subcommand '" + name + "'");
  }

  write_manifest(cfg, digest, outputs);
}

}  // namespace corridor::app
