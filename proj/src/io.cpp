#include "corridor/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corridor/errors.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace corridor::io {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct CsvReader {
  std::ifstream in;
  std::string path;
  int row = 0;
  std::vector<std::string> header;

  explicit CsvReader(const std::string& p) : in(p), path(p) {
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + p + "'");
    std::string line;
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::ParseError, path + ": missing header row");
    }
    header = split_csv(line);
    row = 1;
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line == "\r") continue;
      fields = split_csv(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what, const std::string& column = "") const {
    std::string where = path + " row " + std::to_string(row);
    if (!column.empty()) where += " column '" + column + "'";
    throw Error(ErrorCode::ParseError, where + ": " + what);
  }

  int col(const std::string& name, bool required = true) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    if (required) {
      throw Error(ErrorCode::ParseError, path + ": missing column '" + name + "'");
    }
    return -1;
  }

  double num(const std::vector<std::string>& f, int c, const std::string& name) const {
    if (c < 0 || static_cast<std::size_t>(c) >= f.size() || f[c].empty()) {
      fail("missing value", name);
    }
    try {
      std::size_t pos = 0;
      double v = std::stod(f[c], &pos);
      if (pos != f[c].size()) fail("trailing characters in number", name);
      return v;
    } catch (const std::exception&) {
      fail("not a number: '" + f[c] + "'", name);
    }
  }

  std::string str(const std::vector<std::string>& f, int c, const std::string& name) const {
    if (c < 0 || static_cast<std::size_t>(c) >= f.size() || f[c].empty()) {
      fail("missing value", name);
    }
    return f[c];
  }
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  return out;
}

void dump_json(const std::string& path, const ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

std::map<std::string, geo::RouteProfile> load_routes_csv(const std::string& path) {
  CsvReader r(path);
  const int c_id = r.col("route_id"), c_seq = r.col("seq");
  const int c_lat = r.col("lat"), c_lon = r.col("lon");
  const int c_mult = r.col("segment_multiplier", false);

  struct Row { int seq; geo::GeoPoint p; double mult; };
  std::map<std::string, std::vector<Row>> grouped;
  std::vector<std::string> f;
  while (r.next(f)) {
    Row row;
    row.seq = static_cast<int>(r.num(f, c_seq, "seq"));
    row.p.lat = r.num(f, c_lat, "lat");
    row.p.lon = r.num(f, c_lon, "lon");
    if (!geo::valid_point(row.p)) r.fail("lat/lon out of range");
    row.mult = (c_mult >= 0 && static_cast<std::size_t>(c_mult) < f.size() && !f[c_mult].empty())
                   ? r.num(f, c_mult, "segment_multiplier")
                   : 1.0;
    grouped[r.str(f, c_id, "route_id")].push_back(row);
  }

  std::map<std::string, geo::RouteProfile> out;
  for (auto& [id, rows] : grouped) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.seq < b.seq; });
    std::vector<geo::GeoPoint> pts;
    std::vector<double> mults;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      pts.push_back(rows[i].p);
      if (i + 1 < rows.size()) mults.push_back(rows[i].mult);  // last row's value ignored
    }
    out.emplace(id, geo::build_route_profile(id, std::move(pts), std::move(mults)));
  }
  return out;
}

std::vector<geo::CandidateSite> load_sites_csv(const std::string& path) {
  CsvReader r(path);
  const int c_id = r.col("site_id"), c_lat = r.col("lat"), c_lon = r.col("lon");
  std::vector<geo::CandidateSite> out;
  std::vector<std::string> f;
  while (r.next(f)) {
    geo::CandidateSite s;
    s.site_id = r.str(f, c_id, "site_id");
    s.location.lat = r.num(f, c_lat, "lat");
    s.location.lon = r.num(f, c_lon, "lon");
    if (!geo::valid_point(s.location)) r.fail("lat/lon out of range");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<geo::CandidateSite> load_sites_geojson(const std::string& path) {
  const json j = load_json_file(path);
  if (j.value("type", "") != "FeatureCollection") {
    throw Error(ErrorCode::ParseError, path + ": expected a GeoJSON FeatureCollection");
  }
  std::vector<geo::CandidateSite> out;
  for (const auto& feat : j.at("features")) {
    const auto& geom = feat.at("geometry");
    if (geom.value("type", "") != "Point") {
      throw Error(ErrorCode::ParseError, path + ": only Point features supported");
    }
    geo::CandidateSite s;
    s.site_id = feat.at("properties").at("site_id").get<std::string>();
    s.location.lon = geom.at("coordinates").at(0).get<double>();
    s.location.lat = geom.at("coordinates").at(1).get<double>();
    if (!geo::valid_point(s.location)) {
      throw Error(ErrorCode::ParseError, path + ": site '" + s.site_id + "' out of range");
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_candidates_geojson(const std::string& path,
                              const std::vector<geo::CandidateSite>& candidates) {
  ordered_json features = ordered_json::array();
  for (const auto& c : candidates) {
    ordered_json snaps = ordered_json::array();
    for (const auto& [route_id, snap] : c.snaps) {
      snaps.push_back({{"route_id", route_id},
                       {"milepost_mi", snap.milepost},
                       {"snap_distance_mi", snap.snap_distance}});
    }
    features.push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "Point"}, {"coordinates", {c.location.lon, c.location.lat}}}},
         {"properties", {{"site_id", c.site_id}, {"snaps", snaps}}}});
  }
  dump_json(path, {{"type", "FeatureCollection"}, {"features", features}});
}

std::vector<demand::TripSpec> load_trips_csv(
    const std::string& path, const std::map<std::string, geo::RouteProfile>& routes,
    const vehicle::Registry& classes) {
  CsvReader r(path);
  const int c_id = r.col("trip_id"), c_route = r.col("route_id"), c_dir = r.col("direction");
  const int c_dep = r.col("depart_utc_min"), c_vc = r.col("vehicle_class_id");
  std::vector<demand::TripSpec> out;
  std::vector<std::string> f;
  while (r.next(f)) {
    demand::TripSpec t;
    t.trip_id = r.str(f, c_id, "trip_id");
    t.route_id = r.str(f, c_route, "route_id");
    if (!routes.count(t.route_id)) {
      throw Error(ErrorCode::UnknownRoute, path + " row " + std::to_string(r.row) +
                                               ": unknown route '" + t.route_id + "'");
    }
    t.direction = demand::direction_from_name(r.str(f, c_dir, "direction"));
    t.depart_min = r.num(f, c_dep, "depart_utc_min");
    if (t.depart_min < 0.0) r.fail("depart_utc_min must be >= 0");
    t.vehicle_class_id = r.str(f, c_vc, "vehicle_class_id");
    if (!classes.contains(t.vehicle_class_id)) {
      throw Error(ErrorCode::UnknownVehicleClass,
                  path + " row " + std::to_string(r.row) + ": unknown vehicle class '" +
                      t.vehicle_class_id + "'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<demand::OdPair> load_od_csv(const std::string& path,
                                        const std::map<std::string, geo::RouteProfile>& routes) {
  CsvReader r(path);
  const int c_o = r.col("origin_zone"), c_d = r.col("dest_zone");
  const int c_r = r.col("route_id"), c_w = r.col("weight");
  std::vector<demand::OdPair> out;
  std::vector<std::string> f;
  while (r.next(f)) {
    demand::OdPair od;
    od.origin_zone = r.str(f, c_o, "origin_zone");
    od.dest_zone = r.str(f, c_d, "dest_zone");
    od.route_id = r.str(f, c_r, "route_id");
    if (!routes.count(od.route_id)) {
      throw Error(ErrorCode::UnknownRoute, path + " row " + std::to_string(r.row) +
                                               ": unknown route '" + od.route_id + "'");
    }
    od.weight = r.num(f, c_w, "weight");
    if (od.weight < 0.0) r.fail("weight must be >= 0");
    out.push_back(std::move(od));
  }
  return out;
}

demand::DepartureHistogram load_histogram_json(const std::string& path) {
  const json j = load_json_file(path);
  if (!j.is_array() || j.size() != 24) {
    throw Error(ErrorCode::ParseError, path + ": histogram must be an array of 24 numbers");
  }
  demand::DepartureHistogram h;
  for (int i = 0; i < 24; ++i) h.bins[i] = j[i].get<double>();
  h.validate();
  return h;
}

vehicle::Registry load_vehicle_classes_json(const std::string& path) {
  const json j = load_json_file(path);
  vehicle::Registry reg;
  for (const auto& it : j.at("classes")) {
    vehicle::VehicleClass vc;
    vc.class_id = it.at("class_id").get<std::string>();
    vc.kind = vehicle::kind_from_name(it.at("kind").get<std::string>());
    vc.capacity = it.at("capacity").get<double>();
    vc.capacity_unit = it.at("capacity_unit").get<std::string>();
    vc.usable_fraction = it.at("usable_fraction").get<double>();
    vc.reserve_fraction = it.at("reserve_fraction").get<double>();
    vc.consumption_per_mile = it.at("consumption_per_mile").get<double>();
    vc.replenish_rate_per_min = it.at("replenish_rate_per_min").get<double>();
    vc.weight_sensitivity = it.value("weight_sensitivity", 0.0);
    vc.reference_weight_lb = it.value("reference_weight_lb", 0.0);
    reg.add(std::move(vc));
  }
  return reg;
}

PathwayConfig load_pathways_json(const std::string& path) {
  const json j = load_json_file(path);
  PathwayConfig cfg;
  for (const auto& it : j.at("pathways")) {
    impact::EnergyPathway p;
    p.name = it.at("name").get<std::string>();
    p.carbon_intensity = it.at("carbon_intensity").get<double>();
    p.intensity_unit = it.at("intensity_unit").get<std::string>();
    cfg.pathways.emplace_back(std::move(p), it.at("consumption_per_mile").get<double>());
  }
  if (j.contains("refuel_rates")) {
    for (const auto& it : j.at("refuel_rates")) {
      impact::RefuelRateRow row;
      row.powertrain = it.at("powertrain").get<std::string>();
      row.replenish_per_min = it.at("replenish_rate_per_min").get<double>();
      row.unit = it.at("unit").get<std::string>();
      row.economy_mi_per_unit = it.at("economy_mi_per_unit").get<double>();
      cfg.refuel_rates.push_back(std::move(row));
    }
  }
  return cfg;
}

void write_ledger_csv(const std::string& path, const sim::FleetLedger& ledger,
                      const std::string& unit) {
  auto out = open_out(path);
  out << "site_id,role,total_dispensed,unit,event_count\n";
  for (const auto& [site_id, site] : ledger.in_route) {
    out << site_id << ",inroute," << fmt(site.total) << "," << unit << "," << site.events.size()
        << "\n";
  }
  for (const auto& [dest, total] : ledger.destination) {
    out << dest << ",destination," << fmt(total) << "," << unit << ",0\n";
  }
}

void write_trip_results_csv(const std::string& path, const sim::FleetLedger& ledger) {
  auto out = open_out(path);
  out << "trip_id,completed,stranded_milepost,stop_count,consumed,destination_dispensed\n";
  for (const auto& t : ledger.trip_results) {
    out << t.trip_id << "," << (t.completed ? "true" : "false") << ","
        << (t.stranded_milepost ? fmt(*t.stranded_milepost) : "") << "," << t.stops.size() << ","
        << fmt(t.consumed) << "," << fmt(t.destination_dispensed) << "\n";
  }
}

void write_ledger_events_json(const std::string& path, const sim::FleetLedger& ledger) {
  ordered_json sites = ordered_json::object();
  for (const auto& [site_id, site] : ledger.in_route) {
    ordered_json events = ordered_json::array();
    for (const auto& ev : site.events) {
      events.push_back({{"trip_id", ev.trip_id},
                        {"vehicle_class_id", ev.vehicle_class_id},
                        {"time_min", ev.time_min},
                        {"dispensed", ev.dispensed},
                        {"dwell", ev.dwell}});
    }
    sites[site_id] = {{"total", site.total}, {"events", events}};
  }
  ordered_json j = {{"in_route", sites},
                    {"destination", ledger.destination},
                    {"stranded_trips", ledger.stranded_trips},
                    {"trip_count", ledger.trip_count},
                    {"completed_count", ledger.completed_count},
                    {"completion_rate", ledger.completion_rate}};
  dump_json(path, j);
}

sim::FleetLedger load_ledger_events_json(const std::string& path) {
  const json j = load_json_file(path);
  sim::FleetLedger ledger;
  for (const auto& [site_id, site] : j.at("in_route").items()) {
    sim::SiteLedger sl;
    sl.total = site.at("total").get<double>();
    for (const auto& ev : site.at("events")) {
      sl.events.push_back({ev.at("trip_id").get<std::string>(),
                           ev.at("vehicle_class_id").get<std::string>(),
                           ev.at("time_min").get<double>(), ev.at("dispensed").get<double>(),
                           ev.at("dwell").get<double>()});
    }
    ledger.in_route.emplace(site_id, std::move(sl));
  }
  for (const auto& [k, v] : j.at("destination").items()) {
    ledger.destination[k] = v.get<double>();
  }
  ledger.stranded_trips = j.at("stranded_trips").get<std::vector<std::string>>();
  ledger.trip_count = j.at("trip_count").get<std::size_t>();
  ledger.completed_count = j.at("completed_count").get<std::size_t>();
  ledger.completion_rate = j.at("completion_rate").get<double>();
  return ledger;
}

void write_solution_geojson(const std::string& path, const siting::SitingSolution& sol,
                            const std::vector<geo::CandidateSite>& candidates) {
  ordered_json features = ordered_json::array();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!sol.mask[i]) continue;
    const auto& c = candidates[i];
    double total = 0.0;
    std::size_t events = 0;
    if (auto it = sol.ledger.in_route.find(c.site_id); it != sol.ledger.in_route.end()) {
      total = it->second.total;
      events = it->second.events.size();
    }
    features.push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "Point"}, {"coordinates", {c.location.lon, c.location.lat}}}},
         {"properties",
          {{"site_id", c.site_id}, {"total_dispensed", total}, {"event_count", events}}}});
  }
  dump_json(path, {{"type", "FeatureCollection"}, {"features", features}});
}

void write_solution_summary_json(const std::string& path, const siting::SitingSolution& sol,
                                 std::uint64_t seed) {
  dump_json(path, {{"station_count", sol.station_count},
                   {"stranded_count", sol.stranded_count},
                   {"completion_rate", sol.completion_rate},
                   {"fitness", sol.fitness},
                   {"generations_run", sol.generations_run},
                   {"feasible", sol.feasible},
                   {"mask_hex", siting::mask_to_hex(sol.mask)},
                   {"seed", seed}});
}

void write_curve_csv(const std::string& path, const siting::CompletionCurve& curve) {
  auto out = open_out(path);
  out << "k,completion_rate,stranded_count,mask_hex\n";
  for (const auto& p : curve.points) {
    out << p.k << "," << fmt(p.completion_rate) << "," << p.stranded_count << ","
        << siting::mask_to_hex(p.mask) << "\n";
  }
}

void write_curve_survivors_csv(const std::string& path, const siting::CompletionCurve& curve) {
  auto out = open_out(path);
  out << "k,trip_id\n";
  for (const auto& p : curve.points) {
    for (const auto& t : p.surviving_trips) out << p.k << "," << t << "\n";
  }
}

void write_rollout_csv(const std::string& path, const std::vector<siting::RolloutYear>& years) {
  auto out = open_out(path);
  out << "year,adoption_fraction,station_count,new_sites\n";
  for (const auto& y : years) {
    out << y.year << "," << fmt(y.adoption_fraction) << "," << y.solution.station_count << ",";
    for (std::size_t i = 0; i < y.new_sites.size(); ++i) {
      if (i) out << ";";
      out << y.new_sites[i];
    }
    out << "\n";
  }
}

void write_sizing_csv(const std::string& path, const sizing::SizingReport& report,
                      const std::string& unit) {
  auto out = open_out(path);
  out << "site_id,equipment,rate,unit,busy_min,horizon_min,utilization_target,required_count,"
         "busiest_day_count\n";
  for (const auto& s : report.sites) {
    out << s.site_id << "," << report.equipment.name << "," << fmt(report.equipment.rate) << ","
        << unit << "," << fmt(s.busy_minutes) << "," << fmt(s.horizon_minutes) << ","
        << fmt(s.utilization_target) << "," << s.required_count << "," << s.busiest_day_count
        << "\n";
  }
}

void write_charge_stats_csv(const std::string& path, const sizing::ChargeStats& stats) {
  auto out = open_out(path);
  out << "site_id,event_time_min,power_kw,nameplate_kwh,c_rate,flagged\n";
  for (const auto& e : stats.events) {
    out << e.site_id << "," << fmt(e.event_time_min) << "," << fmt(e.power_kw) << ","
        << fmt(e.nameplate_kwh) << "," << fmt(e.c_rate) << "," << (e.flagged ? "true" : "false")
        << "\n";
  }
}

void write_impact_csv(const std::string& path, const impact::ImpactReport& report) {
  auto out = open_out(path);
  out << "# intensities are illustrative example values\n";
  out << "pathway,intensity,intensity_unit,vmt,consumption,co2_tonnes_per_yr\n";
  for (const auto& r : report.rows) {
    out << r.pathway.name << "," << fmt(r.pathway.carbon_intensity) << ","
        << r.pathway.intensity_unit << "," << fmt(r.vmt_per_year) << ","
        << fmt(r.consumption_per_mile) << "," << fmt(r.co2_tonnes_per_year) << "\n";
  }
}

void write_refuel_rates_csv(const std::string& path,
                            const std::vector<impact::RefuelRateRow>& rows) {
  auto out = open_out(path);
  out << "powertrain,replenish_rate,unit,economy,miles_per_min\n";
  for (const auto& r : rows) {
    out << r.powertrain << "," << fmt(r.replenish_per_min) << "," << r.unit << ","
        << fmt(r.economy_mi_per_unit) << "," << fmt(r.miles_per_min) << "\n";
  }
}

void write_distance_stats_json(const std::string& path, const demand::DistanceStats& stats) {
  ordered_json j = {{"count", stats.count}};
  if (stats.count > 0) {
    j["min"] = *stats.min;
    j["max"] = *stats.max;
    j["mean"] = *stats.mean;
    j["p50"] = *stats.p50;
    j["p90"] = *stats.p90;
    ordered_json hist = ordered_json::array();
    for (const auto& [bin, count] : stats.histogram_50mi) {
      hist.push_back({{"bin_start_mi", bin * 50}, {"count", count}});
    }
    j["histogram_50mi"] = hist;
  }
  dump_json(path, j);
}

}  // namespace corridor::io
