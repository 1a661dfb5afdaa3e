#include "corridor/demand.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corridor/errors.hpp"
#include "corridor/rng.hpp"

namespace corridor::demand {

DepartureHistogram DepartureHistogram::uniform_daytime() {
  DepartureHistogram h;
  for (int hour = 6; hour < 18; ++hour) h.bins[hour] = 1.0 / 12.0;
  return h;
}

void DepartureHistogram::validate() const {
  double sum = 0.0;
  for (double b : bins) {
    if (b < 0.0) throw Error(ErrorCode::NonPositiveInputs, "histogram bin < 0");
    sum += b;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::NonPositiveInputs, "histogram bins must sum to 1");
  }
}

std::string direction_name(Direction d) {
  return d == Direction::Forward ? "forward" : "reverse";
}

Direction direction_from_name(const std::string& name) {
  if (name == "forward") return Direction::Forward;
  if (name == "reverse") return Direction::Reverse;
  throw Error(ErrorCode::ParseError, "unknown direction '" + name + "'");
}

std::vector<TripSpec> sample_trips(const std::vector<OdPair>& od_pairs,
                                   std::size_t n,
                                   const DepartureHistogram& hist,
                                   int day_count,
                                   const std::string& vehicle_class_id,
                                   std::uint64_t seed) {
  hist.validate();
  double total_w = 0.0;
  for (const auto& od : od_pairs) total_w += od.weight;
  if (n > 0 && !(total_w > 0.0)) {
    throw Error(ErrorCode::EmptyWeightSet, "OD weights sum to zero");
  }
  if (day_count < 1) {
    throw Error(ErrorCode::NonPositiveInputs, "day_count must be >= 1");
  }

  Rng rng = Rng::derive(seed, "sample_trips");
  std::vector<TripSpec> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // OD pair proportional to weight.
    double x = rng.next_double() * total_w;
    std::size_t pick = od_pairs.size() - 1;
    for (std::size_t j = 0; j < od_pairs.size(); ++j) {
      x -= od_pairs[j].weight;
      if (x < 0.0) { pick = j; break; }
    }
    // Departure hour from histogram, uniform minute, uniform day.
    double y = rng.next_double();
    int hour = 23;
    for (int h = 0; h < 24; ++h) {
      y -= hist.bins[h];
      if (y < 0.0) { hour = h; break; }
    }
    const int minute = static_cast<int>(rng.below(60));
    const int day = static_cast<int>(rng.below(static_cast<std::uint64_t>(day_count)));

    TripSpec t;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06zu", i);
    t.trip_id = "synth-" + std::string(buf);
    t.route_id = od_pairs[pick].route_id;
    t.direction = Direction::Forward;
    t.depart_min = day * 1440.0 + hour * 60.0 + minute;
    t.vehicle_class_id = vehicle_class_id;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TripSpec> apply_adoption(const std::vector<TripSpec>& trips,
                                     const AdoptionSpec& spec) {
  if (spec.fraction < 0.0 || spec.fraction > 1.0) {
    throw Error(ErrorCode::NonPositiveInputs, "adoption fraction must be in [0,1]");
  }
  std::vector<TripSpec> out;
  if (spec.mode == AdoptionMode::Bernoulli) {
    Rng rng = Rng::derive(spec.seed, "adoption_bernoulli");
    for (const auto& t : trips) {
      if (rng.bernoulli(spec.fraction)) out.push_back(t);
    }
    return out;
  }
  // Deterministic: keep exactly floor(fraction*N), chosen by seeded shuffle,
  // emitted in original order.
  const std::size_t keep =
      static_cast<std::size_t>(std::floor(spec.fraction * static_cast<double>(trips.size())));
  std::vector<std::size_t> idx(trips.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng = Rng::derive(spec.seed, "adoption_deterministic");
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.below(i)]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  out.reserve(keep);
  for (std::size_t i : idx) out.push_back(trips[i]);
  return out;
}

DistanceStats distance_stats(const std::vector<TripSpec>& trips,
                             const std::map<std::string, geo::RouteProfile>& routes) {
  DistanceStats s;
  std::vector<double> lengths;
  lengths.reserve(trips.size());
  for (const auto& t : trips) {
    auto it = routes.find(t.route_id);
    if (it == routes.end()) {
      throw Error(ErrorCode::UnknownRoute, "trip '" + t.trip_id + "' references route '" +
                                               t.route_id + "'");
    }
    lengths.push_back(it->second.length());
  }
  s.count = lengths.size();
  if (lengths.empty()) return s;

  std::sort(lengths.begin(), lengths.end());
  s.min = lengths.front();
  s.max = lengths.back();
  s.mean = std::accumulate(lengths.begin(), lengths.end(), 0.0) / lengths.size();
  // Nearest-rank percentiles.
  auto rank = [&](double p) {
    std::size_t r = static_cast<std::size_t>(std::ceil(p * lengths.size()));
    return lengths[std::max<std::size_t>(r, 1) - 1];
  };
  s.p50 = rank(0.50);
  s.p90 = rank(0.90);
  for (double d : lengths) {
    s.histogram_50mi[static_cast<int>(d / 50.0)]++;
  }
  return s;
}

}  // namespace corridor::demand
