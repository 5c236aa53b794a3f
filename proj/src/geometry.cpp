#include "ggr/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <numbers>

namespace ggr {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

GeoPoint geo_from_degrees(double lat_deg, double lon_deg) {
    assert(lat_deg >= -90.0 && lat_deg <= 90.0);
    const double theta = kPi / 2.0 - lat_deg * kPi / 180.0;
    double phi = std::fmod(lon_deg * kPi / 180.0, kTwoPi);
    if (phi < 0.0)
        phi += kTwoPi;
    if (phi >= kTwoPi) // fmod can land exactly on 2*pi after the adjustment
        phi = 0.0;
    return GeoPoint{theta, phi};
}

double angle_cosine(const GeoPoint& a, const GeoPoint& b) {
    // Identical points must compare as distance 0 exactly; round-off in the
    // product form can land on either side of 1.
    if (a.theta == b.theta && a.phi == b.phi)
        return 1.0;
    // cos(phi_a - phi_b) = cos phi_a cos phi_b + sin phi_a sin phi_b
    const double g = std::cos(a.phi) * std::cos(b.phi) + std::sin(a.phi) * std::sin(b.phi);
    double dot = std::cos(a.theta) * std::cos(b.theta) + (std::sin(a.theta) * std::sin(b.theta)) * g;
    dot = std::min(1.0, std::max(-1.0, dot));
    return dot;
}

double central_angle(const GeoPoint& a, const GeoPoint& b) {
    return std::acos(angle_cosine(a, b));
}

double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
    return kEarthRadiusKm * central_angle(a, b);
}

double hyperbolic_distance(const HyperbolicPoint& a, const HyperbolicPoint& b) {
    const double dot = angle_cosine(a.angular, b.angular);
    if (a.r == b.r && dot == 1.0)
        return 0.0;
    double arg = std::cosh(a.r) * std::cosh(b.r) - (std::sinh(a.r) * std::sinh(b.r)) * dot;
    arg = std::max(1.0, arg);
    return std::acosh(arg);
}

double delay_ms_from_km(double km, const DelayModel& dm) {
    return (km + dm.offset_km) / dm.divisor;
}

double link_delay_ms(const GeoPoint& a, const GeoPoint& b, const DelayModel& dm) {
    return delay_ms_from_km(great_circle_km(a, b), dm);
}

} // namespace ggr
