#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.
// The oracles here deliberately re-derive results from first principles
// (subset enumeration, direct trace walking) instead of calling the planner.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "corridor/geo.hpp"
#include "corridor/rng.hpp"
#include "corridor/sim.hpp"
#include "corridor/siting.hpp"
#include "corridor/vehicle.hpp"

namespace testsupport {

// Straight equatorial route of the requested length; haversine is exactly
// linear in longitude there, so mileposts are easy to reason about.
inline corridor::geo::RouteProfile straight_route(double length_mi,
                                                  const std::string& id = "r1",
                                                  std::vector<double> multipliers = {}) {
  const double deg = length_mi / (corridor::geo::kEarthRadiusMiles * M_PI / 180.0);
  return corridor::geo::build_route_profile(
      id, {{0.0, 0.0}, {0.0, deg}}, std::move(multipliers));
}

inline corridor::vehicle::VehicleClass fcev(double capacity_kg,
                                            const std::string& id = "fcev") {
  corridor::vehicle::VehicleClass vc;
  vc.class_id = id;
  vc.kind = corridor::vehicle::Kind::Fcev;
  vc.capacity = capacity_kg;
  vc.capacity_unit = "kg";
  vc.usable_fraction = 1.0;
  vc.reserve_fraction = 0.20;
  vc.consumption_per_mile = 0.10;
  vc.replenish_rate_per_min = 10.0;
  vc.reference_weight_lb = 33000;
  return vc;
}

inline corridor::vehicle::VehicleClass bev(double capacity_kwh, double charger_kw,
                                           const std::string& id = "bev") {
  corridor::vehicle::VehicleClass vc;
  vc.class_id = id;
  vc.kind = corridor::vehicle::Kind::Bev;
  vc.capacity = capacity_kwh;
  vc.capacity_unit = "kWh";
  vc.usable_fraction = 0.80;
  vc.reserve_fraction = 0.15;
  vc.consumption_per_mile = 1.5625;
  vc.replenish_rate_per_min = charger_kw / 60.0;
  vc.reference_weight_lb = 33000;
  return vc;
}

// --- Independent trip oracle -------------------------------------------------
// Walks the energy trace directly for a fixed stop subset: start full,
// refuel to full exactly at the chosen stations. No shared code with
// sim::plan_trip.

inline bool trace_feasible(double full, double floor,
                           const std::vector<double>& station_energy, double dest_energy,
                           const std::vector<std::size_t>& stops) {
  double onboard = full;
  double prev = 0.0;
  std::size_t next_stop = 0;
  for (std::size_t i = 0; i < station_energy.size(); ++i) {
    const bool chosen = next_stop < stops.size() && stops[next_stop] == i;
    if (!chosen) continue;
    onboard -= station_energy[i] - prev;
    if (onboard < floor - 1e-9) return false;
    onboard = full;
    prev = station_energy[i];
    ++next_stop;
  }
  onboard -= dest_energy - prev;
  return onboard >= floor - 1e-9;
}

struct BruteTrip {
  bool feasible = false;
  int min_stops = 0;
};

// Enumerates every subset of the active stations. station_energy must be
// sorted, cumulative from the origin.
inline BruteTrip brute_force_trip(double full, double floor,
                                  const std::vector<double>& station_energy,
                                  double dest_energy) {
  const std::size_t n = station_energy.size();
  BruteTrip out;
  out.min_stops = static_cast<int>(n) + 1;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::vector<std::size_t> stops;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ull << i)) stops.push_back(i);
    }
    if (trace_feasible(full, floor, station_energy, dest_energy, stops)) {
      out.feasible = true;
      out.min_stops = std::min(out.min_stops, static_cast<int>(stops.size()));
    }
  }
  if (!out.feasible) out.min_stops = 0;
  return out;
}

// --- Random siting scenarios -------------------------------------------------

struct RandomScenarioOptions {
  int max_candidates = 15;
  int max_trips = 30;
  double min_route_mi = 150.0;
  double max_route_mi = 900.0;
  std::vector<double> tank_sizes_kg = {70.0, 80.0, 100.0};
};

inline corridor::siting::Scenario random_scenario(corridor::Rng& rng,
                                                  const RandomScenarioOptions& opt = {}) {
  using namespace corridor;
  siting::Scenario sc;
  const double length = rng.uniform(opt.min_route_mi, opt.max_route_mi);
  geo::RouteProfile route = straight_route(length, "r1");
  sc.routes.emplace("r1", route);

  for (double kg : opt.tank_sizes_kg) {
    sc.classes.add(fcev(kg, "fcev" + std::to_string(static_cast<int>(kg))));
  }

  const int n_cand = 1 + static_cast<int>(rng.below(opt.max_candidates));
  for (int i = 0; i < n_cand; ++i) {
    geo::CandidateSite site;
    site.site_id = "c" + std::to_string(i);
    const double mp = rng.uniform(0.0, length);
    site.location = {0.0, mp / (geo::kEarthRadiusMiles * M_PI / 180.0)};
    site.snaps.emplace("r1", geo::SnapResult{mp, 0.0});
    sc.candidates.push_back(std::move(site));
  }

  const int n_trips = 1 + static_cast<int>(rng.below(opt.max_trips));
  for (int i = 0; i < n_trips; ++i) {
    demand::TripSpec t;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", i);
    t.trip_id = "t" + std::string(buf);
    t.route_id = "r1";
    t.direction = rng.bernoulli(0.5) ? demand::Direction::Forward : demand::Direction::Reverse;
    t.depart_min = static_cast<double>(rng.below(7 * 1440));
    const std::size_t vc = rng.below(opt.tank_sizes_kg.size());
    t.vehicle_class_id =
        "fcev" + std::to_string(static_cast<int>(opt.tank_sizes_kg[vc]));
    sc.trips.push_back(std::move(t));
  }
  return sc;
}

// Exhaustive fleet-level oracle: best (stranded, station count) over all
// candidate masks, evaluated with the brute-force trip oracle only.
struct BruteFleet {
  int best_stranded = 0;
  int best_count = 0;
};

inline int oracle_stranded(const corridor::siting::Scenario& sc,
                           const std::vector<std::uint8_t>& mask) {
  using namespace corridor;
  int stranded = 0;
  for (const auto& trip : sc.trips) {
    const auto& route = sc.routes.at(trip.route_id);
    const auto& vc = sc.classes.get(trip.vehicle_class_id);
    const double c = vc.consumption_per_mile;
    const double length = route.length();
    std::vector<double> station_energy;
    for (std::size_t i = 0; i < sc.candidates.size(); ++i) {
      if (!mask[i]) continue;
      auto it = sc.candidates[i].snaps.find(trip.route_id);
      if (it == sc.candidates[i].snaps.end()) continue;
      const double mp = trip.direction == demand::Direction::Forward
                            ? it->second.milepost
                            : length - it->second.milepost;
      station_energy.push_back(c * route.weighted_distance(mp));
    }
    std::sort(station_energy.begin(), station_energy.end());
    const double dest = c * route.weighted_distance(length);
    // Refuelling at every active station dominates any other stop subset, so
    // feasibility under the mask equals feasibility of the all-stops trace.
    std::vector<std::size_t> all_stops(station_energy.size());
    for (std::size_t i = 0; i < all_stops.size(); ++i) all_stops[i] = i;
    if (!trace_feasible(vc.effective_full(), vc.floor_units(), station_energy, dest, all_stops)) {
      ++stranded;
    }
  }
  return stranded;
}

inline BruteFleet brute_force_fleet(const corridor::siting::Scenario& sc) {
  const std::size_t n = sc.candidates.size();
  BruteFleet best;
  best.best_stranded = static_cast<int>(sc.trips.size()) + 1;
  best.best_count = static_cast<int>(n) + 1;
  for (std::uint64_t m = 0; m < (1ull << n); ++m) {
    std::vector<std::uint8_t> mask(n, 0);
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mask[i] = (m >> i) & 1;
      count += mask[i];
    }
    const int stranded = oracle_stranded(sc, mask);
    if (stranded < best.best_stranded ||
        (stranded == best.best_stranded && count < best.best_count)) {
      best.best_stranded = stranded;
      best.best_count = count;
    }
  }
  return best;
}

}  // namespace testsupport
