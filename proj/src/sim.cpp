#include "corridor/sim.hpp"

#include <algorithm>
#include <cmath>

#include "corridor/errors.hpp"

namespace corridor::sim {

PlanOutcome plan_trip(double effective_full, double floor,
                      std::span<const double> point_energy) {
  PlanOutcome out;
  double onboard = effective_full;
  double cur_e = 0.0;
  for (std::size_t idx = 0; idx < point_energy.size(); ++idx) {
    const double leg = point_energy[idx] - cur_e;
    if (onboard - leg < floor - kEnergyTol) {
      // Current position is station idx-1 when idx > 0, else the origin.
      if (idx > 0 && onboard < effective_full) {
        out.refuel_points.push_back(idx - 1);
        onboard = effective_full;
      }
      if (onboard - leg < floor - kEnergyTol) {
        out.completed = false;
        out.stranded_cum_energy = cur_e + (onboard - floor);
        return out;
      }
    }
    onboard -= leg;
    cur_e = point_energy[idx];
  }
  out.completed = true;
  out.dest_onboard = onboard;
  return out;
}

namespace {

// Trip-direction geometry: a reverse trip traverses the route from its end
// to its start; mileposts and weighted distances are mirrored accordingly.
struct TripFrame {
  const geo::RouteProfile* route;
  bool reverse;
  double total_weighted;

  double weighted_at(double trip_milepost) const {
    if (!reverse) return route->weighted_distance(trip_milepost);
    return total_weighted - route->weighted_distance(route->length() - trip_milepost);
  }

  double milepost_at_weighted(double w) const {
    if (!reverse) return route->milepost_at_weighted(w);
    return route->length() - route->milepost_at_weighted(total_weighted - w);
  }
};

}  // namespace

TripResult simulate_trip(const demand::TripSpec& trip,
                         const geo::RouteProfile& route,
                         const vehicle::VehicleClass& vc,
                         std::vector<ActiveStation> active_sites,
                         double speed_mph) {
  if (!(speed_mph > 0.0)) {
    throw Error(ErrorCode::NonPositiveInputs, "speed must be > 0");
  }
  const double length = route.length();
  for (std::size_t i = 0; i < active_sites.size(); ++i) {
    if (active_sites[i].milepost < -1e-6 || active_sites[i].milepost > length + 1e-6) {
      throw Error(ErrorCode::SiteNotOnRoute,
                  "site '" + active_sites[i].site_id + "' milepost " +
                      std::to_string(active_sites[i].milepost) + " outside route '" +
                      route.route_id + "'");
    }
    if (i > 0 && active_sites[i].milepost < active_sites[i - 1].milepost) {
      throw Error(ErrorCode::UnsortedStations,
                  "active stations not sorted by milepost on route '" + route.route_id + "'");
    }
  }

  const TripFrame frame{&route, trip.direction == demand::Direction::Reverse,
                        route.weighted_distance(length)};
  const double c_base = vc.consumption_per_mile;  // trips run at reference weight
  const double full = vc.effective_full();
  const double floor = vc.floor_units();

  std::vector<double> point_energy;
  point_energy.reserve(active_sites.size() + 1);
  for (const auto& s : active_sites) {
    point_energy.push_back(c_base * frame.weighted_at(s.milepost));
  }
  point_energy.push_back(c_base * frame.total_weighted);

  const PlanOutcome plan = plan_trip(full, floor, point_energy);

  TripResult res;
  res.trip_id = trip.trip_id;
  if (!plan.completed) {
    res.completed = false;
    res.stranded_milepost =
        frame.milepost_at_weighted(std::max(0.0, plan.stranded_cum_energy) / c_base);
  } else {
    res.completed = true;
    res.arrival_onboard = plan.dest_onboard;
    res.destination_dispensed = full - plan.dest_onboard;
  }

  // Replay the plan to attach energies and timestamps to the chosen stops.
  double onboard = full;
  double cur_e = 0.0;
  double dwell_total = 0.0;
  double dispensed_total = 0.0;
  std::size_t next_refuel = 0;
  for (std::size_t i = 0; i < active_sites.size(); ++i) {
    const double arrive_e = point_energy[i];
    if (!plan.completed && arrive_e > plan.stranded_cum_energy + kEnergyTol) break;
    onboard -= arrive_e - cur_e;
    cur_e = arrive_e;
    if (next_refuel < plan.refuel_points.size() && plan.refuel_points[next_refuel] == i) {
      StopEvent ev;
      ev.site_id = active_sites[i].site_id;
      ev.milepost = active_sites[i].milepost;
      ev.arrival_time = trip.depart_min + active_sites[i].milepost / speed_mph * 60.0 + dwell_total;
      ev.arrival_onboard = onboard;
      ev.dispensed = full - onboard;
      ev.dwell = replenish_time(vc, ev.dispensed);
      dwell_total += ev.dwell;
      dispensed_total += ev.dispensed;
      onboard = full;
      res.stops.push_back(std::move(ev));
      ++next_refuel;
    }
  }

  if (plan.completed) {
    res.consumed = full + dispensed_total - res.arrival_onboard;
    res.arrival_time = trip.depart_min + length / speed_mph * 60.0 + dwell_total;
  } else {
    res.arrival_onboard = floor;
    res.consumed = full + dispensed_total - floor;
  }
  return res;
}

FleetLedger simulate_fleet(const std::vector<demand::TripSpec>& trips,
                           const std::map<std::string, geo::RouteProfile>& routes,
                           const vehicle::Registry& classes,
                           const std::vector<std::uint8_t>& mask,
                           const std::vector<geo::CandidateSite>& candidates,
                           double speed_mph) {
  if (mask.size() != candidates.size()) {
    throw Error(ErrorCode::InvalidConfig, "mask length != candidate count");
  }
  std::vector<const demand::TripSpec*> ordered;
  ordered.reserve(trips.size());
  for (const auto& t : trips) ordered.push_back(&t);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->trip_id < b->trip_id; });

  FleetLedger ledger;
  ledger.trip_count = trips.size();
  for (const auto* trip : ordered) {
    auto rit = routes.find(trip->route_id);
    if (rit == routes.end()) {
      throw Error(ErrorCode::UnknownRoute,
                  "trip '" + trip->trip_id + "' references route '" + trip->route_id + "'");
    }
    const geo::RouteProfile& route = rit->second;
    const vehicle::VehicleClass& vc = classes.get(trip->vehicle_class_id);

    std::vector<ActiveStation> active;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!mask[i]) continue;
      auto sit = candidates[i].snaps.find(trip->route_id);
      if (sit == candidates[i].snaps.end()) continue;
      const double mp = trip->direction == demand::Direction::Forward
                            ? sit->second.milepost
                            : route.length() - sit->second.milepost;
      active.push_back({candidates[i].site_id, mp});
    }
    std::sort(active.begin(), active.end(), [](const auto& a, const auto& b) {
      return a.milepost != b.milepost ? a.milepost < b.milepost : a.site_id < b.site_id;
    });

    TripResult res = simulate_trip(*trip, route, vc, std::move(active), speed_mph);
    if (res.completed) {
      ledger.completed_count++;
      const std::string dest_key =
          trip->route_id + (trip->direction == demand::Direction::Forward ? ":end" : ":start");
      ledger.destination[dest_key] += res.destination_dispensed;
    } else {
      ledger.stranded_trips.push_back(res.trip_id);
    }
    for (const auto& stop : res.stops) {
      auto& site = ledger.in_route[stop.site_id];
      site.total += stop.dispensed;
      site.events.push_back(
          {res.trip_id, trip->vehicle_class_id, stop.arrival_time, stop.dispensed, stop.dwell});
    }
    ledger.trip_results.push_back(std::move(res));
  }
  ledger.completion_rate =
      ledger.trip_count == 0
          ? 1.0
          : static_cast<double>(ledger.completed_count) / static_cast<double>(ledger.trip_count);
  return ledger;
}

}  // namespace corridor::sim
