#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corridor/geo.hpp"

namespace corridor::demand {

struct Zone {
  std::string zone_id;
  geo::GeoPoint centroid;
  double weight = 0.0;  // >= 0
};

struct DepartureHistogram {
  std::array<double, 24> bins{};  // probability per local hour, sums to 1

  static DepartureHistogram uniform_daytime();  // 06:00-18:00 default
  void validate() const;
};

enum class Direction { Forward, Reverse };

std::string direction_name(Direction d);
Direction direction_from_name(const std::string& name);

struct TripSpec {
  std::string trip_id;
  std::string route_id;
  Direction direction = Direction::Forward;
  double depart_min = 0.0;  // minutes since epoch, UTC
  std::string vehicle_class_id;
};

enum class AdoptionMode { Bernoulli, Deterministic };

struct AdoptionSpec {
  double fraction = 1.0;  // [0, 1]
  AdoptionMode mode = AdoptionMode::Deterministic;
  std::uint64_t seed = 0;
};

struct OdPair {
  std::string origin_zone;
  std::string dest_zone;
  std::string route_id;
  double weight = 0.0;
};

std::vector<TripSpec> sample_trips(const std::vector<OdPair>& od_pairs,
                                   std::size_t n,
                                   const DepartureHistogram& hist,
                                   int day_count,
                                   const std::string& vehicle_class_id,
                                   std::uint64_t seed);

std::vector<TripSpec> apply_adoption(const std::vector<TripSpec>& trips,
                                     const AdoptionSpec& spec);

struct DistanceStats {
  std::size_t count = 0;
  // Absent when count == 0.
  std::optional<double> min, max, mean, p50, p90;
  std::map<int, std::size_t> histogram_50mi;  // bin index -> count
};

DistanceStats distance_stats(const std::vector<TripSpec>& trips,
                             const std::map<std::string, geo::RouteProfile>& routes);

}  // namespace corridor::demand
