#include <doctest.h>

#include <cmath>

#include "corridor/errors.hpp"
#include "corridor/geo.hpp"
#include "corridor/rng.hpp"
#include "support/helpers.hpp"

using namespace corridor;
using namespace corridor::geo;

namespace {
const double kMilesPerEquatorDeg = kEarthRadiusMiles * M_PI / 180.0;  // 69.093
}

TEST_CASE("haversine basics") {
  GeoPoint x{34.05, -118.25};
  CHECK(haversine(x, x) == doctest::Approx(0.0));
  CHECK(haversine({0, 0}, {0, 1}) == doctest::Approx(69.093).epsilon(0.0002));
  CHECK(haversine({90, 0}, {-90, 0}) == doctest::Approx(12436.8).epsilon(0.0001));
  // symmetry
  GeoPoint a{10, 20}, b{-5, 60};
  CHECK(haversine(a, b) == doctest::Approx(haversine(b, a)));
}

TEST_CASE("build_route_profile mileposts") {
  auto r = build_route_profile("r", {{0, 0}, {0, 1}});
  REQUIRE(r.mileposts.size() == 2);
  CHECK(r.mileposts[0] == 0.0);
  CHECK(r.mileposts[1] == doctest::Approx(69.093).epsilon(0.0002));

  auto r3 = build_route_profile("r", {{0, 0}, {0, 1}, {0, 2}});
  CHECK(r3.mileposts[2] == doctest::Approx(2 * r3.mileposts[1]).epsilon(1e-9));
  CHECK(r3.segment_multiplier == std::vector<double>{1.0, 1.0});
}

TEST_CASE("build_route_profile errors") {
  CHECK_THROWS_AS(build_route_profile("r", {{0, 0}}), Error);
  try {
    build_route_profile("r", {{0, 0}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewVertices);
  }
  try {
    build_route_profile("r", {{0, 0}, {0, 0}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateVertex);
  }
}

TEST_CASE("milepost monotonicity over random routes") {
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    std::vector<GeoPoint> pts;
    double lat = rng.uniform(-40, 40), lon = rng.uniform(-100, 100);
    for (int i = 0; i < 8; ++i) {
      pts.push_back({lat, lon});
      lat += rng.uniform(0.05, 0.4);
      lon += rng.uniform(0.05, 0.4);
    }
    auto r = build_route_profile("r", pts);
    for (std::size_t i = 0; i + 1 < r.mileposts.size(); ++i) {
      CHECK(r.mileposts[i] < r.mileposts[i + 1]);
    }
  }
}

TEST_CASE("snap_site on-route and perpendicular") {
  auto r = build_route_profile("r", {{0, 0}, {0, 1}});
  SUBCASE("exactly at a vertex") {
    auto s = snap_site({0, 1}, r);
    CHECK(s.milepost == doctest::Approx(r.length()).epsilon(1e-9));
    CHECK(s.snap_distance == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("3 mi perpendicular from the midpoint") {
    const double off_deg = 3.0 / kMilesPerEquatorDeg;
    auto s = snap_site({off_deg, 0.5}, r);
    CHECK(s.milepost == doctest::Approx(34.55).epsilon(0.0015));
    CHECK(s.snap_distance == doctest::Approx(3.0).epsilon(0.017));
  }
  SUBCASE("beyond the final vertex clamps") {
    GeoPoint beyond{0, 1.5};
    auto s = snap_site(beyond, r);
    CHECK(s.milepost == doctest::Approx(r.length()).epsilon(1e-9));
    CHECK(s.snap_distance == doctest::Approx(haversine(beyond, {0, 1})).epsilon(0.001));
  }
}

TEST_CASE("snap optimality against dense sampling") {
  Rng rng(11);
  for (int it = 0; it < 10; ++it) {
    std::vector<GeoPoint> pts;
    double lat = rng.uniform(-30, 30), lon = rng.uniform(-60, 60);
    for (int i = 0; i < 5; ++i) {
      pts.push_back({lat, lon});
      lat += rng.uniform(0.1, 0.5);
      lon += rng.uniform(0.1, 0.5);
    }
    auto r = build_route_profile("r", pts);
    GeoPoint site{pts[2].lat + rng.uniform(-0.3, 0.3), pts[2].lon + rng.uniform(-0.3, 0.3)};
    auto s = snap_site(site, r);

    double best_sampled = 1e18;
    for (int k = 0; k <= 10000; ++k) {
      const double mp = r.length() * k / 10000.0;
      // interpolate linearly in lat/lon over the containing segment
      std::size_t seg = 0;
      while (seg + 2 < r.mileposts.size() && r.mileposts[seg + 1] < mp) ++seg;
      const double t = (mp - r.mileposts[seg]) / (r.mileposts[seg + 1] - r.mileposts[seg]);
      GeoPoint p{pts[seg].lat + t * (pts[seg + 1].lat - pts[seg].lat),
                 pts[seg].lon + t * (pts[seg + 1].lon - pts[seg].lon)};
      best_sampled = std::min(best_sampled, haversine(site, p));
    }
    CHECK(s.snap_distance <= best_sampled + 0.05);
  }
}

TEST_CASE("filter_candidates keeps only near sites") {
  auto r = testsupport::straight_route(300.0, "r1");
  std::vector<CandidateSite> sites(3);
  sites[0].site_id = "on";
  sites[0].location = {0, r.vertices[1].lon / 2};
  sites[1].site_id = "far";
  sites[1].location = {6.0 / kMilesPerEquatorDeg, r.vertices[1].lon / 2};
  sites[2].site_id = "near";
  sites[2].location = {3.0 / kMilesPerEquatorDeg, r.vertices[1].lon / 4};

  auto kept = filter_candidates(sites, {r}, 5.0);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].site_id == "on");
  CHECK(kept[0].snaps.at("r1").snap_distance == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(kept[1].site_id == "near");

  SUBCASE("idempotent") {
    auto again = filter_candidates(kept, {r}, 5.0);
    REQUIRE(again.size() == kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      CHECK(again[i].site_id == kept[i].site_id);
      CHECK(again[i].snaps.at("r1").milepost ==
            doctest::Approx(kept[i].snaps.at("r1").milepost));
    }
  }
  SUBCASE("empty input") {
    CHECK(filter_candidates({}, {r}, 5.0).empty());
  }
}

TEST_CASE("site near two routes snaps to both") {
  auto r1 = testsupport::straight_route(200.0, "a");
  auto r2 = build_route_profile("b", {{0.01, 0.0}, {0.01, r1.vertices[1].lon}});
  std::vector<CandidateSite> sites(1);
  sites[0].site_id = "mid";
  sites[0].location = {0.005, r1.vertices[1].lon / 2};
  auto kept = filter_candidates(sites, {r1, r2}, 5.0);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].snaps.size() == 2);
}

TEST_CASE("raster_candidates grid arithmetic") {
  SUBCASE("4 cells") {
    auto s = raster_candidates({0, 1, 0, 1, 0.5, 0.5});
    REQUIRE(s.size() == 4);
    CHECK(s[0].site_id == "r0c0");
    CHECK(s[0].location.lat == doctest::Approx(0.25));
    CHECK(s[0].location.lon == doctest::Approx(0.25));
    CHECK(s[3].location.lat == doctest::Approx(0.75));
  }
  SUBCASE("single cell at centroid") {
    auto s = raster_candidates({0, 1, 0, 1, 1, 1});
    REQUIRE(s.size() == 1);
    CHECK(s[0].location.lat == doctest::Approx(0.5));
    CHECK(s[0].location.lon == doctest::Approx(0.5));
  }
  SUBCASE("partial cell counts via ceil") {
    auto s = raster_candidates({0, 1, 0, 1.5, 1, 1});
    CHECK(s.size() == 2);
  }
  SUBCASE("deterministic") {
    auto a = raster_candidates({10, 12, 20, 23, 0.7, 0.9});
    auto b = raster_candidates({10, 12, 20, 23, 0.7, 0.9});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].site_id == b[i].site_id);
      CHECK(a[i].location.lat == b[i].location.lat);
      CHECK(a[i].location.lon == b[i].location.lon);
    }
  }
}

TEST_CASE("weighted distance respects segment multipliers") {
  auto deg = 100.0 / kMilesPerEquatorDeg;
  auto r = build_route_profile("r", {{0, 0}, {0, deg}, {0, 2 * deg}}, {1.0, 1.5});
  CHECK(r.weighted_distance(100.0) == doctest::Approx(100.0));
  CHECK(r.weighted_distance(200.0) == doctest::Approx(250.0).epsilon(1e-6));
  CHECK(r.milepost_at_weighted(175.0) == doctest::Approx(150.0).epsilon(1e-6));
}
