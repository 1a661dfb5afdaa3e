#include "corridor/geo.hpp"

#include <algorithm>
#include <cmath>

#include "corridor/errors.hpp"

namespace corridor::geo {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
}

bool valid_point(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) &&
         p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;
  return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

double RouteProfile::weighted_distance(double milepost) const {
  double m = std::clamp(milepost, 0.0, length());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < mileposts.size(); ++i) {
    if (m <= mileposts[i]) break;
    const double seg_end = std::min(m, mileposts[i + 1]);
    acc += (seg_end - mileposts[i]) * segment_multiplier[i];
  }
  return acc;
}

double RouteProfile::milepost_at_weighted(double w) const {
  if (w <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < mileposts.size(); ++i) {
    const double seg_len = mileposts[i + 1] - mileposts[i];
    const double seg_w = seg_len * segment_multiplier[i];
    if (acc + seg_w >= w) {
      return mileposts[i] + (w - acc) / segment_multiplier[i];
    }
    acc += seg_w;
  }
  return length();
}

RouteProfile build_route_profile(std::string route_id,
                                 std::vector<GeoPoint> vertices,
                                 std::vector<double> multipliers) {
  if (vertices.size() < 2) {
    throw Error(ErrorCode::TooFewVertices,
                "route '" + route_id + "' needs at least 2 vertices, got " +
                    std::to_string(vertices.size()));
  }
  RouteProfile r;
  r.route_id = std::move(route_id);
  r.mileposts.reserve(vertices.size());
  r.mileposts.push_back(0.0);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const double d = haversine(vertices[i], vertices[i + 1]);
    if (d <= 0.0) {
      throw Error(ErrorCode::DuplicateVertex,
                  "route '" + r.route_id + "' has duplicate consecutive vertex at index " +
                      std::to_string(i + 1));
    }
    r.mileposts.push_back(r.mileposts.back() + d);
  }
  if (multipliers.empty()) {
    multipliers.assign(vertices.size() - 1, 1.0);
  }
  if (multipliers.size() != vertices.size() - 1) {
    throw Error(ErrorCode::NonPositiveInputs,
                "route '" + r.route_id + "' multiplier count mismatch");
  }
  for (double m : multipliers) {
    if (!(m > 0.0)) {
      throw Error(ErrorCode::NonPositiveInputs,
                  "route '" + r.route_id + "' has non-positive segment multiplier");
    }
  }
  r.vertices = std::move(vertices);
  r.segment_multiplier = std::move(multipliers);
  return r;
}

SnapResult snap_site(const GeoPoint& site, const RouteProfile& route) {
  SnapResult best{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i + 1 < route.vertices.size(); ++i) {
    const GeoPoint& a = route.vertices[i];
    const GeoPoint& b = route.vertices[i + 1];
    // Local equirectangular frame anchored at the segment midpoint latitude.
    const double lat0 = 0.5 * (a.lat + b.lat) * kDegToRad;
    const double kx = kEarthRadiusMiles * kDegToRad * std::cos(lat0);
    const double ky = kEarthRadiusMiles * kDegToRad;
    const double ax = a.lon * kx, ay = a.lat * ky;
    const double bx = b.lon * kx, by = b.lat * ky;
    const double px = site.lon * kx, py = site.lat * ky;
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = ax + t * vx, cy = ay + t * vy;
    const double dist = std::hypot(px - cx, py - cy);
    if (dist < best.snap_distance) {
      best.snap_distance = dist;
      best.milepost = route.mileposts[i] + t * (route.mileposts[i + 1] - route.mileposts[i]);
    }
  }
  return best;
}

std::vector<CandidateSite> filter_candidates(const std::vector<CandidateSite>& sites,
                                             const std::vector<RouteProfile>& routes,
                                             double d_miles) {
  if (!(d_miles > 0.0)) {
    throw Error(ErrorCode::NonPositiveInputs, "candidate radius must be > 0");
  }
  std::vector<CandidateSite> out;
  for (const auto& s : sites) {
    CandidateSite kept{s.site_id, s.location, {}};
    for (const auto& r : routes) {
      const SnapResult snap = snap_site(s.location, r);
      if (snap.snap_distance <= d_miles) {
        kept.snaps.emplace(r.route_id, snap);
      }
    }
    if (!kept.snaps.empty()) {
      out.push_back(std::move(kept));
    }
  }
  return out;
}

int RegionGrid::rows() const {
  return static_cast<int>(std::ceil((lat_max - lat_min) / d_lat - 1e-12));
}

int RegionGrid::cols() const {
  return static_cast<int>(std::ceil((lon_max - lon_min) / d_lon - 1e-12));
}

std::vector<CandidateSite> raster_candidates(const RegionGrid& grid) {
  if (!(grid.lat_min < grid.lat_max) || !(grid.lon_min < grid.lon_max) ||
      !(grid.d_lat > 0.0) || !(grid.d_lon > 0.0)) {
    throw Error(ErrorCode::NonPositiveInputs, "invalid region grid");
  }
  std::vector<CandidateSite> out;
  const int rows = grid.rows();
  const int cols = grid.cols();
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      CandidateSite s;
      s.site_id = "r" + std::to_string(r) + "c" + std::to_string(c);
      s.location.lat = grid.lat_min + (r + 0.5) * grid.d_lat;
      s.location.lon = grid.lon_min + (c + 0.5) * grid.d_lon;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace corridor::geo
