#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corridor/sim.hpp"

namespace corridor::siting {

using StationMask = std::vector<std::uint8_t>;  // one flag per candidate site

int popcount(const StationMask& mask);
std::string mask_to_hex(const StationMask& mask);
StationMask mask_from_hex(const std::string& hex, std::size_t n_candidates);

struct Scenario {
  std::vector<demand::TripSpec> trips;
  std::map<std::string, geo::RouteProfile> routes;
  vehicle::Registry classes;
  std::vector<geo::CandidateSite> candidates;
  double speed_mph = 50.0;
};

struct GaConfig {
  int population = 200;
  int generations = 500;
  int tournament_k = 3;
  double crossover_p = 0.9;
  double mutation_p = -1.0;  // per bit; < 0 means 1/candidate_count
  int elitism = 2;
  int stall_limit = 50;
  std::uint64_t seed = 0;
  std::optional<int> cardinality_cap;
};

struct SitingSolution {
  StationMask mask;
  int station_count = 0;
  int stranded_count = 0;
  double completion_rate = 1.0;
  sim::FleetLedger ledger;
  double fitness = 0.0;
  int generations_run = 0;
  bool feasible = true;  // false when stranded_count > 0 (minimal-stranded result)
};

// Precompiled per-trip decision-point energies; makes mask evaluation cheap
// and guarantees the optimizer and simulate_fleet agree (both go through
// sim::plan_trip).
class CompiledScenario {
 public:
  explicit CompiledScenario(const Scenario& scenario);

  int count_stranded(const StationMask& mask) const;
  std::size_t candidate_count() const { return n_candidates_; }
  const Scenario& scenario() const { return *scenario_; }

 private:
  struct TripPlanData {
    std::vector<std::size_t> cand_index;  // candidates on this trip, travel order
    std::vector<double> cum_energy;       // cumulative energy at each, same order
    double dest_energy = 0.0;
    double effective_full = 0.0;
    double floor = 0.0;
  };
  const Scenario* scenario_;
  std::size_t n_candidates_ = 0;
  std::vector<TripPlanData> trips_;
};

// stranded x (candidate_count + 1) + active station count; with a
// cardinality cap the mask is repaired first and fitness is the stranded
// count alone.
double fitness(const StationMask& mask, const CompiledScenario& compiled,
               std::optional<int> cardinality_cap = std::nullopt);

SitingSolution ga_optimize(const Scenario& scenario, const GaConfig& cfg,
                           const StationMask* pinned = nullptr,
                           const std::vector<StationMask>& seed_masks = {},
                           int workers = 1);

// Full enumeration over 2^N masks, N <= 20. Lexicographic optimum:
// min stranded, then min station count, then lowest mask.
SitingSolution exhaustive_optimize(const Scenario& scenario);

struct CurvePoint {
  int k = 0;
  double completion_rate = 0.0;
  int stranded_count = 0;
  StationMask mask;
  std::vector<std::string> surviving_trips;
};

struct CompletionCurve {
  std::vector<CurvePoint> points;  // k strictly decreasing
};

CompletionCurve completion_curve(const Scenario& scenario, const GaConfig& cfg,
                                 const std::vector<int>& k_values, int workers = 1);

struct RolloutYear {
  int year = 0;
  double adoption_fraction = 0.0;
  SitingSolution solution;
  std::vector<std::string> new_sites;  // sites added relative to the prior year
};

// Year 1 unconstrained; later years force the prior year's sites active, so
// station sets are nested by construction. Per-year trip populations come
// from demand::apply_adoption with year-indexed seeds.
std::vector<RolloutYear> rollout(const Scenario& base,
                                 const std::vector<double>& adoption_by_year,
                                 const GaConfig& cfg,
                                 demand::AdoptionMode mode = demand::AdoptionMode::Deterministic,
                                 int workers = 1);

}  // namespace corridor::siting
