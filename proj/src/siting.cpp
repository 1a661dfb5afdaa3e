#include "corridor/siting.hpp"

#include <algorithm>
#include <thread>

#include "corridor/errors.hpp"
#include "corridor/rng.hpp"

namespace corridor::siting {

int popcount(const StationMask& mask) {
  int n = 0;
  for (auto b : mask) n += b ? 1 : 0;
  return n;
}

std::string mask_to_hex(const StationMask& mask) {
  // Candidate 0 is the least-significant bit; most-significant nibble first.
  const std::size_t nibbles = (mask.size() + 3) / 4;
  std::string out(nibbles, '0');
  static const char* digits = "0123456789abcdef";
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const std::size_t nib = i / 4;
    const int bit = static_cast<int>(i % 4);
    const std::size_t pos = nibbles - 1 - nib;
    const int cur = std::string("0123456789abcdef").find(out[pos]);
    out[pos] = digits[cur | (1 << bit)];
  }
  return out;
}

StationMask mask_from_hex(const std::string& hex, std::size_t n_candidates) {
  StationMask mask(n_candidates, 0);
  for (std::size_t j = 0; j < hex.size(); ++j) {
    const char c = hex[hex.size() - 1 - j];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw Error(ErrorCode::ParseError, "invalid hex mask character");
    for (int bit = 0; bit < 4; ++bit) {
      const std::size_t i = j * 4 + bit;
      if (v & (1 << bit)) {
        if (i >= n_candidates) {
          throw Error(ErrorCode::ParseError, "hex mask sets a bit beyond candidate count");
        }
        mask[i] = 1;
      }
    }
  }
  return mask;
}

CompiledScenario::CompiledScenario(const Scenario& scenario)
    : scenario_(&scenario), n_candidates_(scenario.candidates.size()) {
  trips_.reserve(scenario.trips.size());
  for (const auto& trip : scenario.trips) {
    auto rit = scenario.routes.find(trip.route_id);
    if (rit == scenario.routes.end()) {
      throw Error(ErrorCode::UnknownRoute,
                  "trip '" + trip.trip_id + "' references route '" + trip.route_id + "'");
    }
    const geo::RouteProfile& route = rit->second;
    const vehicle::VehicleClass& vc = scenario.classes.get(trip.vehicle_class_id);
    const bool reverse = trip.direction == demand::Direction::Reverse;
    const double total_w = route.weighted_distance(route.length());
    const double c = vc.consumption_per_mile;

    struct Entry { double e; std::size_t idx; std::string_view site; };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < scenario.candidates.size(); ++i) {
      auto sit = scenario.candidates[i].snaps.find(trip.route_id);
      if (sit == scenario.candidates[i].snaps.end()) continue;
      const double w = reverse ? total_w - route.weighted_distance(sit->second.milepost)
                               : route.weighted_distance(sit->second.milepost);
      entries.push_back({c * w, i, scenario.candidates[i].site_id});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.e != b.e ? a.e < b.e : a.site < b.site;
    });

    TripPlanData data;
    data.cand_index.reserve(entries.size());
    data.cum_energy.reserve(entries.size());
    for (const auto& e : entries) {
      data.cand_index.push_back(e.idx);
      data.cum_energy.push_back(e.e);
    }
    data.dest_energy = c * total_w;
    data.effective_full = vc.effective_full();
    data.floor = vc.floor_units();
    trips_.push_back(std::move(data));
  }
}

int CompiledScenario::count_stranded(const StationMask& mask) const {
  int stranded = 0;
  std::vector<double> points;
  for (const auto& trip : trips_) {
    points.clear();
    for (std::size_t j = 0; j < trip.cand_index.size(); ++j) {
      if (mask[trip.cand_index[j]]) points.push_back(trip.cum_energy[j]);
    }
    points.push_back(trip.dest_energy);
    if (!sim::plan_trip(trip.effective_full, trip.floor, points).completed) ++stranded;
  }
  return stranded;
}

namespace {

void repair_to_cap(StationMask& mask, int cap, const StationMask* pinned, Rng& rng) {
  std::vector<std::size_t> removable;
  int count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    ++count;
    if (!pinned || !(*pinned)[i]) removable.push_back(i);
  }
  while (count > cap && !removable.empty()) {
    const std::size_t pick = rng.below(removable.size());
    mask[removable[pick]] = 0;
    removable.erase(removable.begin() + static_cast<std::ptrdiff_t>(pick));
    --count;
  }
}

struct Scored {
  StationMask mask;
  double fitness = 0.0;
  int count = 0;
};

bool better(const Scored& a, const Scored& b) {
  if (a.fitness != b.fitness) return a.fitness < b.fitness;
  if (a.count != b.count) return a.count < b.count;
  return std::lexicographical_compare(a.mask.begin(), a.mask.end(), b.mask.begin(),
                                      b.mask.end());
}

// Deterministic partitioned evaluation; fitness is pure, so results are
// identical for any worker count.
void evaluate_all(std::vector<Scored>& pop, const CompiledScenario& compiled,
                  std::optional<int> cap, int workers) {
  auto eval_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const int stranded = compiled.count_stranded(pop[i].mask);
      pop[i].count = popcount(pop[i].mask);
      pop[i].fitness =
          cap ? stranded
              : stranded * (static_cast<double>(compiled.candidate_count()) + 1.0) + pop[i].count;
    }
  };
  if (workers <= 1 || pop.size() < 2) {
    eval_range(0, pop.size());
    return;
  }
  const std::size_t n = pop.size();
  const std::size_t w = std::min<std::size_t>(workers, n);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < w; ++t) {
    threads.emplace_back(eval_range, n * t / w, n * (t + 1) / w);
  }
  for (auto& th : threads) th.join();
}

SitingSolution finalize(const Scenario& scenario, const CompiledScenario& compiled,
                        StationMask mask, std::optional<int> cap, int generations_run) {
  SitingSolution sol;
  sol.ledger = sim::simulate_fleet(scenario.trips, scenario.routes, scenario.classes, mask,
                                   scenario.candidates, scenario.speed_mph);
  sol.station_count = popcount(mask);
  sol.stranded_count = static_cast<int>(sol.ledger.stranded_trips.size());
  sol.completion_rate = sol.ledger.completion_rate;
  sol.fitness = cap ? sol.stranded_count
                    : sol.stranded_count * (static_cast<double>(compiled.candidate_count()) + 1.0) +
                          sol.station_count;
  sol.generations_run = generations_run;
  sol.feasible = sol.stranded_count == 0;
  sol.mask = std::move(mask);
  return sol;
}

}  // namespace

double fitness(const StationMask& mask, const CompiledScenario& compiled,
               std::optional<int> cardinality_cap) {
  const int stranded = compiled.count_stranded(mask);
  if (cardinality_cap) return stranded;
  return stranded * (static_cast<double>(compiled.candidate_count()) + 1.0) + popcount(mask);
}

SitingSolution ga_optimize(const Scenario& scenario, const GaConfig& cfg,
                           const StationMask* pinned,
                           const std::vector<StationMask>& seed_masks, int workers) {
  const std::size_t n = scenario.candidates.size();
  if (n == 0) throw Error(ErrorCode::NoCandidates, "scenario has no candidate sites");
  if (cfg.population < 2 || cfg.elitism >= cfg.population || cfg.tournament_k < 1) {
    throw Error(ErrorCode::InvalidConfig, "invalid GA configuration");
  }
  const CompiledScenario compiled(scenario);
  const double mut_p = cfg.mutation_p >= 0.0 ? cfg.mutation_p : 1.0 / static_cast<double>(n);
  Rng rng = Rng::derive(cfg.seed, "ga_optimize");

  auto apply_constraints = [&](StationMask& m) {
    if (pinned) {
      for (std::size_t i = 0; i < n; ++i) {
        if ((*pinned)[i]) m[i] = 1;
      }
    }
    if (cfg.cardinality_cap) repair_to_cap(m, *cfg.cardinality_cap, pinned, rng);
  };

  std::vector<Scored> pop;
  pop.reserve(cfg.population);
  {
    StationMask ones(n, 1);
    apply_constraints(ones);
    pop.push_back({std::move(ones), 0.0, 0});
  }
  for (const auto& seed_mask : seed_masks) {
    if (pop.size() >= static_cast<std::size_t>(cfg.population)) break;
    StationMask m = seed_mask;
    apply_constraints(m);
    pop.push_back({std::move(m), 0.0, 0});
  }
  while (pop.size() < static_cast<std::size_t>(cfg.population)) {
    StationMask m(n, 0);
    for (std::size_t i = 0; i < n; ++i) m[i] = rng.bernoulli(0.5) ? 1 : 0;
    apply_constraints(m);
    pop.push_back({std::move(m), 0.0, 0});
  }
  evaluate_all(pop, compiled, cfg.cardinality_cap, workers);

  Scored best = *std::min_element(pop.begin(), pop.end(), better);
  int stall = 0;
  int gen = 0;
  for (; gen < cfg.generations && stall < cfg.stall_limit; ++gen) {
    std::vector<Scored> next;
    next.reserve(cfg.population);
    if (cfg.elitism > 0) {
      std::vector<std::size_t> order(pop.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return better(pop[a], pop[b]); });
      for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[e]]);
    }
    auto tournament = [&]() -> const StationMask& {
      std::size_t winner = rng.below(pop.size());
      for (int t = 1; t < cfg.tournament_k; ++t) {
        const std::size_t c = rng.below(pop.size());
        if (better(pop[c], pop[winner])) winner = c;
      }
      return pop[winner].mask;
    };
    while (next.size() < static_cast<std::size_t>(cfg.population)) {
      const StationMask& p1 = tournament();
      const StationMask& p2 = tournament();
      StationMask c1 = p1, c2 = p2;
      if (rng.bernoulli(cfg.crossover_p)) {
        for (std::size_t i = 0; i < n; ++i) {
          if (rng.bernoulli(0.5)) std::swap(c1[i], c2[i]);
        }
      }
      for (StationMask* child : {&c1, &c2}) {
        for (std::size_t i = 0; i < n; ++i) {
          if (rng.bernoulli(mut_p)) (*child)[i] ^= 1;
        }
        apply_constraints(*child);
        if (next.size() < static_cast<std::size_t>(cfg.population)) {
          next.push_back({std::move(*child), 0.0, 0});
        }
      }
    }
    pop = std::move(next);
    evaluate_all(pop, compiled, cfg.cardinality_cap, workers);
    const Scored& gen_best = *std::min_element(pop.begin(), pop.end(), better);
    if (better(gen_best, best)) {
      best = gen_best;
      stall = 0;
    } else {
      ++stall;
    }
  }
  return finalize(scenario, compiled, best.mask, cfg.cardinality_cap, gen);
}

SitingSolution exhaustive_optimize(const Scenario& scenario) {
  const std::size_t n = scenario.candidates.size();
  if (n > 20) {
    throw Error(ErrorCode::TooManyCandidates,
                "exhaustive search limited to 20 candidates, got " + std::to_string(n));
  }
  const CompiledScenario compiled(scenario);
  StationMask mask(n, 0), best_mask(n, 0);
  int best_stranded = compiled.count_stranded(best_mask);
  int best_count = 0;
  const std::uint64_t total = 1ull << n;
  for (std::uint64_t m = 1; m < total; ++m) {
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mask[i] = (m >> i) & 1;
      count += mask[i];
    }
    if (count > best_count && best_stranded == 0) continue;  // cannot improve
    const int stranded = compiled.count_stranded(mask);
    const bool improves =
        stranded < best_stranded ||
        (stranded == best_stranded &&
         (count < best_count ||
          (count == best_count && std::lexicographical_compare(mask.begin(), mask.end(),
                                                               best_mask.begin(), best_mask.end()))));
    if (improves) {
      best_mask = mask;
      best_stranded = stranded;
      best_count = count;
    }
  }
  return finalize(scenario, compiled, best_mask, std::nullopt, 0);
}

CompletionCurve completion_curve(const Scenario& scenario, const GaConfig& cfg,
                                 const std::vector<int>& k_values, int workers) {
  for (std::size_t i = 0; i + 1 < k_values.size(); ++i) {
    if (k_values[i] <= k_values[i + 1]) {
      throw Error(ErrorCode::InvalidConfig, "k_values must be strictly descending");
    }
  }
  for (int k : k_values) {
    if (k < 0 || static_cast<std::size_t>(k) > scenario.candidates.size()) {
      throw Error(ErrorCode::InvalidConfig, "k outside [0, candidate count]");
    }
  }
  CompletionCurve curve;
  std::vector<SitingSolution> sols;
  std::optional<StationMask> prev;
  for (int k : k_values) {
    GaConfig cfg_k = cfg;
    cfg_k.cardinality_cap = k;
    cfg_k.seed = cfg.seed + static_cast<std::uint64_t>(k) * 0x9e37u;
    std::vector<StationMask> seeds;
    if (prev) seeds.push_back(*prev);  // restriction pin from the (k+1) search
    sols.push_back(ga_optimize(scenario, cfg_k, nullptr, seeds, workers));
    prev = sols.back().mask;
  }
  // A smaller-k mask is admissible at every larger k, so the reported curve
  // can be made exactly monotone by promoting any better small-k solution.
  for (std::size_t i = sols.size(); i-- > 1;) {
    if (sols[i].completion_rate > sols[i - 1].completion_rate) {
      sols[i - 1] = sols[i];
    }
  }
  for (std::size_t i = 0; i < sols.size(); ++i) {
    CurvePoint p;
    p.k = k_values[i];
    p.completion_rate = sols[i].completion_rate;
    p.stranded_count = sols[i].stranded_count;
    p.mask = sols[i].mask;
    for (const auto& tr : sols[i].ledger.trip_results) {
      if (tr.completed) p.surviving_trips.push_back(tr.trip_id);
    }
    curve.points.push_back(std::move(p));
  }
  return curve;
}

std::vector<RolloutYear> rollout(const Scenario& base,
                                 const std::vector<double>& adoption_by_year,
                                 const GaConfig& cfg, demand::AdoptionMode mode, int workers) {
  for (std::size_t i = 0; i + 1 < adoption_by_year.size(); ++i) {
    if (adoption_by_year[i + 1] < adoption_by_year[i]) {
      throw Error(ErrorCode::NonMonotoneAdoption, "adoption fractions must be non-decreasing");
    }
  }
  std::vector<RolloutYear> out;
  std::optional<StationMask> prev_mask;
  for (std::size_t y = 0; y < adoption_by_year.size(); ++y) {
    demand::AdoptionSpec spec;
    spec.fraction = adoption_by_year[y];
    spec.mode = mode;
    spec.seed = cfg.seed + y + 1;  // year-indexed stream
    Scenario year_scenario = base;
    year_scenario.trips = demand::apply_adoption(base.trips, spec);

    std::vector<StationMask> seeds;
    if (prev_mask) seeds.push_back(*prev_mask);
    SitingSolution sol = ga_optimize(year_scenario, cfg,
                                     prev_mask ? &*prev_mask : nullptr, seeds, workers);

    RolloutYear ry;
    ry.year = static_cast<int>(y) + 1;
    ry.adoption_fraction = adoption_by_year[y];
    for (std::size_t i = 0; i < sol.mask.size(); ++i) {
      if (sol.mask[i] && (!prev_mask || !(*prev_mask)[i])) {
        ry.new_sites.push_back(base.candidates[i].site_id);
      }
    }
    prev_mask = sol.mask;
    ry.solution = std::move(sol);
    out.push_back(std::move(ry));
  }
  return out;
}

}  // namespace corridor::siting
