#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corridor/demand.hpp"
#include "corridor/geo.hpp"
#include "corridor/vehicle.hpp"

namespace corridor::sim {

struct ActiveStation {
  std::string site_id;
  double milepost = 0.0;  // trip-direction miles from the trip origin
};

struct StopEvent {
  std::string site_id;
  double milepost = 0.0;
  double arrival_time = 0.0;     // absolute minutes
  double arrival_onboard = 0.0;  // units on arrival, before dispensing
  double dispensed = 0.0;
  double dwell = 0.0;            // minutes
};

struct TripResult {
  std::string trip_id;
  bool completed = false;
  std::optional<double> stranded_milepost;
  std::vector<StopEvent> stops;
  double destination_dispensed = 0.0;
  double consumed = 0.0;
  double arrival_onboard = 0.0;
  double arrival_time = 0.0;  // absolute minutes, completed trips only
};

// Greedy farthest-safe-advance planner over cumulative leg energies. Shared
// by the full simulator and the fast fitness path so they can never disagree.
// point_energy holds the cumulative energy from the origin to each station in
// travel order, then to the destination as the final entry.
struct PlanOutcome {
  bool completed = false;
  std::vector<std::size_t> refuel_points;  // indices into stations
  // When stranded: the cumulative energy coordinate at which the trace hits
  // the floor.
  double stranded_cum_energy = 0.0;
  double dest_onboard = 0.0;
};

PlanOutcome plan_trip(double effective_full, double floor,
                      std::span<const double> point_energy);

// Energy comparisons use this absolute tolerance so float dust never strands
// a trip.
inline constexpr double kEnergyTol = 1e-9;

TripResult simulate_trip(const demand::TripSpec& trip,
                         const geo::RouteProfile& route,
                         const vehicle::VehicleClass& vc,
                         std::vector<ActiveStation> active_sites,
                         double speed_mph);

struct LedgerEvent {
  std::string trip_id;
  std::string vehicle_class_id;
  double time_min = 0.0;  // arrival at the pump/charger
  double dispensed = 0.0;
  double dwell = 0.0;
};

struct SiteLedger {
  double total = 0.0;
  std::vector<LedgerEvent> events;
};

struct FleetLedger {
  std::map<std::string, SiteLedger> in_route;          // site_id -> ledger
  std::map<std::string, double> destination;           // destination key -> total
  std::vector<std::string> stranded_trips;
  std::size_t trip_count = 0;
  std::size_t completed_count = 0;
  double completion_rate = 1.0;  // 1.0 when trip_count == 0
  std::vector<TripResult> trip_results;                // trip_id order
};

// Candidate mask semantics: mask[i] == active for candidates[i]. Only
// candidates snapped to a trip's route participate in that trip.
FleetLedger simulate_fleet(const std::vector<demand::TripSpec>& trips,
                           const std::map<std::string, geo::RouteProfile>& routes,
                           const vehicle::Registry& classes,
                           const std::vector<std::uint8_t>& mask,
                           const std::vector<geo::CandidateSite>& candidates,
                           double speed_mph);

}  // namespace corridor::sim
