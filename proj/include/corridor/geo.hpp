#pragma once

#include <map>
#include <string>
#include <vector>

namespace corridor::geo {

inline constexpr double kEarthRadiusMiles = 3958.7613;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

bool valid_point(const GeoPoint& p);

// Great-circle distance in miles.
double haversine(const GeoPoint& a, const GeoPoint& b);

struct RouteProfile {
  std::string route_id;
  std::vector<GeoPoint> vertices;           // >= 2
  std::vector<double> mileposts;            // cumulative miles, mileposts[0] == 0
  std::vector<double> segment_multiplier;   // size vertices-1, all > 0

  double length() const { return mileposts.back(); }

  // Integral of segment_multiplier over [0, milepost]; used as the
  // consumption-weighted distance so grade/wind effects enter as data.
  double weighted_distance(double milepost) const;

  // Inverse of weighted_distance: milepost at which the weighted distance
  // from 0 reaches w (clamped to [0, length]).
  double milepost_at_weighted(double w) const;
};

RouteProfile build_route_profile(std::string route_id,
                                 std::vector<GeoPoint> vertices,
                                 std::vector<double> multipliers = {});

struct SnapResult {
  double milepost = 0.0;       // miles
  double snap_distance = 0.0;  // miles
};

// Nearest point on the polyline, segment projection in a per-segment local
// equirectangular frame. Ties broken toward the smaller milepost.
SnapResult snap_site(const GeoPoint& site, const RouteProfile& route);

struct CandidateSite {
  std::string site_id;
  GeoPoint location;
  std::map<std::string, SnapResult> snaps;  // route_id -> snap
};

// Keeps sites whose minimum snap distance over all routes is <= d and
// records a snap entry for every route within d.
std::vector<CandidateSite> filter_candidates(const std::vector<CandidateSite>& sites,
                                             const std::vector<RouteProfile>& routes,
                                             double d_miles);

struct RegionGrid {
  double lat_min, lat_max;
  double lon_min, lon_max;
  double d_lat, d_lon;  // > 0

  int rows() const;
  int cols() const;
};

// One candidate per grid cell, at the cell centroid. site_id is "r<row>c<col>".
std::vector<CandidateSite> raster_candidates(const RegionGrid& grid);

}  // namespace corridor::geo
