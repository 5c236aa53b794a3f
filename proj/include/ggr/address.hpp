#pragma once

#include <cassert>
#include <string>

#include "ggr/geometry.hpp"

namespace ggr {

enum class Scheme { geo, gh, rgh };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name); // throws config_error

/// Scheme-tagged geometric address.  GEO addresses carry only the angular
/// part; GH/RGH addresses add the hyperbolic radius.  All nodes in a topology
/// carry the same tag; mixing tags in a distance call is a programming error.
class Address {
public:
    static Address geo(const GeoPoint& p) { return Address{HyperbolicPoint{0.0, p}, false}; }
    static Address hyper(double r, const GeoPoint& p) { return Address{HyperbolicPoint{r, p}, true}; }

    bool is_hyperbolic() const { return hyperbolic_; }
    const GeoPoint& angular() const { return point_.angular; }
    double radius() const { return point_.r; }
    const HyperbolicPoint& hyperbolic_point() const {
        assert(hyperbolic_);
        return point_;
    }

private:
    Address(const HyperbolicPoint& p, bool h) : point_(p), hyperbolic_(h) {}
    HyperbolicPoint point_;
    bool hyperbolic_;
};

/// Scheme-metric distance: great-circle km for GEO addresses, the H^3 metric
/// for hyperbolic ones.  Asserts matching tags.
inline double address_distance(const Address& a, const Address& b) {
    assert(a.is_hyperbolic() == b.is_hyperbolic());
    if (a.is_hyperbolic())
        return hyperbolic_distance(a.hyperbolic_point(), b.hyperbolic_point());
    return great_circle_km(a.angular(), b.angular());
}

} // namespace ggr
