#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "corridor/demand.hpp"
#include "corridor/errors.hpp"
#include "corridor/io.hpp"
#include "support/helpers.hpp"

using namespace corridor;
using namespace corridor::demand;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

std::map<std::string, geo::RouteProfile> one_route() {
  std::map<std::string, geo::RouteProfile> routes;
  routes.emplace("r1", testsupport::straight_route(600.0, "r1"));
  return routes;
}

vehicle::Registry one_class() {
  vehicle::Registry reg;
  reg.add(testsupport::fcev(70.0, "fcev70"));
  return reg;
}

}  // namespace

TEST_CASE("load_trips_csv") {
  const auto routes = one_route();
  const auto classes = one_class();
  SUBCASE("well-formed rows") {
    TempFile f("trips_ok.csv",
               "trip_id,route_id,direction,depart_utc_min,vehicle_class_id\n"
               "a,r1,forward,480,fcev70\n"
               "b,r1,reverse,600,fcev70\n"
               "c,r1,forward,720,fcev70\n");
    auto trips = io::load_trips_csv(f.path.string(), routes, classes);
    REQUIRE(trips.size() == 3);
    CHECK(trips[1].direction == Direction::Reverse);
    CHECK(trips[2].depart_min == 720.0);
  }
  SUBCASE("unknown route names the row") {
    TempFile f("trips_badroute.csv",
               "trip_id,route_id,direction,depart_utc_min,vehicle_class_id\n"
               "a,r1,forward,480,fcev70\n"
               "b,nope,forward,480,fcev70\n");
    try {
      io::load_trips_csv(f.path.string(), routes, classes);
      FAIL("expected UnknownRoute");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownRoute);
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }
  SUBCASE("unknown vehicle class") {
    TempFile f("trips_badvc.csv",
               "trip_id,route_id,direction,depart_utc_min,vehicle_class_id\n"
               "a,r1,forward,480,huh\n");
    CHECK_THROWS_AS(io::load_trips_csv(f.path.string(), routes, classes), Error);
  }
  SUBCASE("header only") {
    TempFile f("trips_empty.csv",
               "trip_id,route_id,direction,depart_utc_min,vehicle_class_id\n");
    CHECK(io::load_trips_csv(f.path.string(), routes, classes).empty());
  }
}

TEST_CASE("sample_trips") {
  DepartureHistogram point_mass;
  point_mass.bins[8] = 1.0;
  std::vector<OdPair> od = {{"z1", "z2", "r1", 1.0}};

  SUBCASE("n = 0") {
    CHECK(sample_trips(od, 0, point_mass, 1, "fcev70", 1).empty());
  }
  SUBCASE("point-mass histogram forces the hour") {
    auto trips = sample_trips(od, 5, point_mass, 1, "fcev70", 1);
    REQUIRE(trips.size() == 5);
    for (const auto& t : trips) {
      CHECK(t.depart_min >= 480.0);
      CHECK(t.depart_min < 540.0);
      CHECK(t.route_id == "r1");
    }
  }
  SUBCASE("weights respected within binomial 3-sigma") {
    std::vector<OdPair> pairs = {{"a", "b", "heavy", 9.0}, {"a", "c", "light", 1.0}};
    auto trips = sample_trips(pairs, 10000, point_mass, 1, "fcev70", 99);
    std::size_t heavy = 0;
    for (const auto& t : trips) {
      if (t.route_id == "heavy") ++heavy;
    }
    CHECK(std::abs(heavy / 10000.0 - 0.9) < 0.09);
  }
  SUBCASE("reproducible from seed") {
    auto a = sample_trips(od, 50, point_mass, 7, "fcev70", 1234);
    auto b = sample_trips(od, 50, point_mass, 7, "fcev70", 1234);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].trip_id == b[i].trip_id);
      CHECK(a[i].depart_min == b[i].depart_min);
    }
  }
  SUBCASE("zero total weight") {
    std::vector<OdPair> zero = {{"a", "b", "r1", 0.0}};
    CHECK_THROWS_AS(sample_trips(zero, 3, point_mass, 1, "fcev70", 1), Error);
  }
  SUBCASE("sampled hours always have histogram mass") {
    DepartureHistogram h = DepartureHistogram::uniform_daytime();
    auto trips = sample_trips(od, 2000, h, 3, "fcev70", 5);
    for (const auto& t : trips) {
      const int hour = static_cast<int>(std::fmod(t.depart_min, 1440.0)) / 60;
      CHECK(h.bins[hour] > 0.0);
    }
  }
}

TEST_CASE("apply_adoption") {
  std::vector<TripSpec> trips;
  for (int i = 0; i < 100; ++i) {
    trips.push_back({"t" + std::to_string(1000 + i), "r1", Direction::Forward,
                     static_cast<double>(i), "fcev70"});
  }
  SUBCASE("fraction 0") {
    CHECK(apply_adoption(trips, {0.0, AdoptionMode::Deterministic, 1}).empty());
  }
  SUBCASE("fraction 1 preserves order") {
    auto out = apply_adoption(trips, {1.0, AdoptionMode::Deterministic, 1});
    REQUIRE(out.size() == 100);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].trip_id == trips[i].trip_id);
  }
  SUBCASE("deterministic keeps exactly floor(f*N)") {
    auto out = apply_adoption(trips, {0.1, AdoptionMode::Deterministic, 7});
    CHECK(out.size() == 10);
    auto again = apply_adoption(trips, {0.1, AdoptionMode::Deterministic, 7});
    REQUIRE(again.size() == out.size());
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(again[i].trip_id == out[i].trip_id);
  }
  SUBCASE("bernoulli size within 4 sigma over resamples") {
    const double f = 0.3;
    const double sigma = std::sqrt(100 * f * (1 - f));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto out = apply_adoption(trips, {f, AdoptionMode::Bernoulli, seed});
      CHECK(std::abs(static_cast<double>(out.size()) - 30.0) <= 4 * sigma);
    }
  }
}

TEST_CASE("distance_stats") {
  std::map<std::string, geo::RouteProfile> routes;
  routes.emplace("r600", testsupport::straight_route(600.0, "r600"));
  routes.emplace("r100", testsupport::straight_route(100.0, "r100"));
  routes.emplace("r300", testsupport::straight_route(300.0, "r300"));

  SUBCASE("single trip") {
    std::vector<TripSpec> trips = {{"a", "r600", Direction::Forward, 0, "fcev70"}};
    auto s = distance_stats(trips, routes);
    CHECK(s.count == 1);
    CHECK(*s.min == doctest::Approx(600.0).epsilon(1e-6));
    CHECK(*s.max == *s.min);
    CHECK(*s.mean == *s.min);
    CHECK(*s.p50 == *s.min);
  }
  SUBCASE("nearest-rank p50") {
    std::vector<TripSpec> trips = {{"a", "r100", Direction::Forward, 0, "fcev70"},
                                   {"b", "r300", Direction::Forward, 0, "fcev70"}};
    auto s = distance_stats(trips, routes);
    CHECK(*s.mean == doctest::Approx(200.0).epsilon(1e-6));
    CHECK(*s.p50 == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(*s.p90 == doctest::Approx(300.0).epsilon(1e-6));
    std::size_t binned = 0;
    for (const auto& [bin, count] : s.histogram_50mi) binned += count;
    CHECK(binned == 2);
  }
  SUBCASE("empty") {
    auto s = distance_stats({}, routes);
    CHECK(s.count == 0);
    CHECK_FALSE(s.min.has_value());
    CHECK(s.histogram_50mi.empty());
  }
}
