#pragma once

#include <cstddef>
#include <vector>

#include "ggr/address.hpp"
#include "ggr/geometry.hpp"

namespace ggr::kernels {

/// Batch distance kernels.  The inner loops of topology growth and routing
/// reduce to "compare one probe point against many stored points"; both
/// comparisons are monotone in a transcendental-free surrogate (the cosine of
/// the central angle, resp. the arccosh argument of the H3 metric), so the
/// batch kernels compute only the surrogate with mul/add arithmetic.
///
/// Backends must be bit-identical: the AVX2 variant evaluates the exact same
/// per-lane expression tree as the scalar reference (the project is compiled
/// with -ffp-contract=off so the scalar path cannot fuse).  Equivalence is
/// enforced by tests/test_kernels.cpp.

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
void force_backend(Backend b); // throws config_error if unsupported
void reset_backend();          // back to the best supported backend

/// Precomputed trig values of a probe point.
struct AngularProbe {
    double ct, st, cp, sp;
    static AngularProbe from(const GeoPoint& p);
};

/// Precomputed cosh/sinh of a probe radius.
struct RadialProbe {
    double ch, sh;
    static RadialProbe from(double r);
};

/// Struct-of-arrays views over per-node precomputed values; all pointers
/// valid for n elements.
struct AngularSoA {
    const double *ct, *st, *cp, *sp;
};
struct RadialSoA {
    const double *ch, *sh;
};

/// out[i] = cos of the central angle between node i and the probe, clamped to
/// [-1, 1].  Lanes whose stored values equal the probe's exactly produce 1.0,
/// so identical points rank at distance 0 ahead of everything else.
void angle_cos_batch(const AngularSoA& a, size_t n, const AngularProbe& p, double* out);

/// out[i] = arccosh argument of the H3 distance between node i and the probe,
/// clamped to >= 1; exactly-equal points produce 1.0.
void hyper_arg_batch(const AngularSoA& a, const RadialSoA& r, size_t n, const AngularProbe& p,
                     const RadialProbe& q, double* out);

namespace scalar {
void angle_cos_batch(const AngularSoA& a, size_t n, const AngularProbe& p, double* out);
void hyper_arg_batch(const AngularSoA& a, const RadialSoA& r, size_t n, const AngularProbe& p,
                     const RadialProbe& q, double* out);
} // namespace scalar

/// Struct-of-arrays coordinate table for one topology.  Append-only; row i
/// holds the precomputed trig/hyperbolic values of node i's address.
class CoordTable {
public:
    explicit CoordTable(bool hyperbolic) : hyperbolic_(hyperbolic) {}

    void reserve(size_t n);
    void push_back(const Address& a);
    size_t size() const { return ct_.size(); }
    bool hyperbolic() const { return hyperbolic_; }

    struct Probe {
        AngularProbe ang;
        RadialProbe rad;
    };
    Probe make_probe(const Address& target) const;

    /// Fill out[0..size) with ranking keys against the probe; smaller key
    /// means closer in the scheme metric.  GEO: -cos(dtheta); GH/RGH: the
    /// arccosh argument.
    void distance_keys(const Probe& p, double* out) const;

    /// Key of a single row, same arithmetic as the batch path.
    double key_of(size_t i, const Probe& p) const;

    /// Map a ranking key back to the scheme-metric distance (km for GEO,
    /// dimensionless for GH/RGH).
    double key_to_distance(double key) const;

    AngularSoA angular_view() const { return {ct_.data(), st_.data(), cp_.data(), sp_.data()}; }
    RadialSoA radial_view() const { return {ch_.data(), sh_.data()}; }

private:
    bool hyperbolic_;
    std::vector<double> ct_, st_, cp_, sp_;
    std::vector<double> ch_, sh_;
};

} // namespace ggr::kernels
