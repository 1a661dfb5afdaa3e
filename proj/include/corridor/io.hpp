#pragma once

#include <map>
#include <string>
#include <vector>

#include "corridor/demand.hpp"
#include "corridor/geo.hpp"
#include "corridor/impact.hpp"
#include "corridor/sim.hpp"
#include "corridor/siting.hpp"
#include "corridor/sizing.hpp"
#include "corridor/vehicle.hpp"

namespace corridor::io {

// Deterministic float formatting shared by every writer ("%.10g").
std::string fmt(double v);

// routes CSV: route_id,seq,lat,lon,segment_multiplier (multiplier optional;
// applies to the segment starting at this vertex, last row's value ignored).
std::map<std::string, geo::RouteProfile> load_routes_csv(const std::string& path);

// site CSV: site_id,lat,lon
std::vector<geo::CandidateSite> load_sites_csv(const std::string& path);

// GeoJSON FeatureCollection of Points with property site_id.
std::vector<geo::CandidateSite> load_sites_geojson(const std::string& path);

void write_candidates_geojson(const std::string& path,
                              const std::vector<geo::CandidateSite>& candidates);

// trips CSV: trip_id,route_id,direction,depart_utc_min,vehicle_class_id.
// Referential integrity checked against routes and classes.
std::vector<demand::TripSpec> load_trips_csv(
    const std::string& path, const std::map<std::string, geo::RouteProfile>& routes,
    const vehicle::Registry& classes);

// OD-weight CSV: origin_zone,dest_zone,route_id,weight.
std::vector<demand::OdPair> load_od_csv(const std::string& path,
                                        const std::map<std::string, geo::RouteProfile>& routes);

// Histogram JSON: array of 24 numbers.
demand::DepartureHistogram load_histogram_json(const std::string& path);

vehicle::Registry load_vehicle_classes_json(const std::string& path);

struct PathwayConfig {
  std::vector<std::pair<impact::EnergyPathway, double>> pathways;  // + consumption/mile
  std::vector<impact::RefuelRateRow> refuel_rates;  // miles_per_min filled by caller
};

PathwayConfig load_pathways_json(const std::string& path);

void write_ledger_csv(const std::string& path, const sim::FleetLedger& ledger,
                      const std::string& unit);
void write_trip_results_csv(const std::string& path, const sim::FleetLedger& ledger);

// Full event schedule; lets the sizing stage consume exactly the simulated
// ledger without re-simulation drift.
void write_ledger_events_json(const std::string& path, const sim::FleetLedger& ledger);
sim::FleetLedger load_ledger_events_json(const std::string& path);

void write_solution_geojson(const std::string& path, const siting::SitingSolution& sol,
                            const std::vector<geo::CandidateSite>& candidates);
void write_solution_summary_json(const std::string& path, const siting::SitingSolution& sol,
                                 std::uint64_t seed);
void write_curve_csv(const std::string& path, const siting::CompletionCurve& curve);
void write_curve_survivors_csv(const std::string& path, const siting::CompletionCurve& curve);
void write_rollout_csv(const std::string& path, const std::vector<siting::RolloutYear>& years);
void write_sizing_csv(const std::string& path, const sizing::SizingReport& report,
                      const std::string& unit);
void write_charge_stats_csv(const std::string& path, const sizing::ChargeStats& stats);
void write_impact_csv(const std::string& path, const impact::ImpactReport& report);
void write_refuel_rates_csv(const std::string& path,
                            const std::vector<impact::RefuelRateRow>& rows);
void write_distance_stats_json(const std::string& path, const demand::DistanceStats& stats);

}  // namespace corridor::io
