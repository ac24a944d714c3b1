#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "scarf/error.hpp"

namespace scarf {

inline constexpr double kEarthRadiusMiles = 3958.8;

struct GeoPoint {
    double lat{0.0};
    double lon{0.0};

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

[[nodiscard]] inline bool valid_lat(double lat) { return std::isfinite(lat) && lat >= -90.0 && lat <= 90.0; }
[[nodiscard]] inline bool valid_lon(double lon) { return std::isfinite(lon) && lon >= -180.0 && lon <= 180.0; }

inline void require_valid(const GeoPoint& p) {
    if (!valid_lat(p.lat)) {
        throw Error(ErrorKind::InvariantViolation, "latitude out of range [-90,90]: " + std::to_string(p.lat));
    }
    if (!valid_lon(p.lon)) {
        throw Error(ErrorKind::InvariantViolation, "longitude out of range [-180,180]: " + std::to_string(p.lon));
    }
}

/// Great-circle distance on a sphere of radius 3958.8 miles.
[[nodiscard]] inline double haversine_miles(const GeoPoint& a, const GeoPoint& b) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * deg;
    const double dlon = (b.lon - a.lon) * deg;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    double h = s1 * s1 + std::cos(a.lat * deg) * std::cos(b.lat * deg) * s2 * s2;
    if (h > 1.0) {
        h = 1.0;
    }
    return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

} // namespace scarf
