#pragma once

#include <cmath>

namespace ggr {

/// Point on the unit sphere.  theta is the colatitude (polar angle from the
/// north pole) in [0, pi]; phi is the longitude in [0, 2*pi).  Latitude in
/// degrees is converted exactly once, at ingestion, via geo_from_degrees().
struct GeoPoint {
    double theta = 0.0;
    double phi = 0.0;
};

/// Point in three-dimensional hyperbolic space (curvature -1), spherical
/// coordinates: dimensionless radius plus the angular GeoPoint.
struct HyperbolicPoint {
    double r = 0.0;
    GeoPoint angular;
};

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kDelayOffsetKm = 1165.0;
inline constexpr double kDelayDivisor = 49.0;

/// Link delay model: delay(ms) = (distance(km) + offset) / divisor.
/// The defaults are fixed constants; overriding them requires an explicit
/// config flag and is recorded in the run manifest.
struct DelayModel {
    double offset_km = kDelayOffsetKm;
    double divisor = kDelayDivisor;

    bool overridden() const {
        return offset_km != kDelayOffsetKm || divisor != kDelayDivisor;
    }
};

GeoPoint geo_from_degrees(double lat_deg, double lon_deg);

/// cos of the central angle between a and b, clamped into [-1, 1].
/// cos(phi_a - phi_b) is expanded into the product form so the scalar path
/// evaluates the exact same expression tree as the batch kernels.
double angle_cosine(const GeoPoint& a, const GeoPoint& b);

/// Central angle in radians, in [0, pi].
double central_angle(const GeoPoint& a, const GeoPoint& b);

/// Great-circle distance in km: kEarthRadiusKm * central_angle.
double great_circle_km(const GeoPoint& a, const GeoPoint& b);

/// Distance in H^3: arccosh(cosh r_a cosh r_b - sinh r_a sinh r_b cos dtheta),
/// with the arccosh argument clamped to >= 1.
double hyperbolic_distance(const HyperbolicPoint& a, const HyperbolicPoint& b);

double delay_ms_from_km(double km, const DelayModel& dm = {});

double link_delay_ms(const GeoPoint& a, const GeoPoint& b, const DelayModel& dm = {});

} // namespace ggr
