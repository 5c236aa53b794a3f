#include "ggr/kernels.hpp"

#include <cassert>
#include <cmath>

#include "ggr/errors.hpp"

namespace ggr::kernels {

#ifdef GGR_HAVE_AVX2
namespace avx2 {
void angle_cos_batch(const AngularSoA& a, size_t n, const AngularProbe& p, double* out);
void hyper_arg_batch(const AngularSoA& a, const RadialSoA& r, size_t n, const AngularProbe& p,
                     const RadialProbe& q, double* out);
} // namespace avx2
#endif

namespace {

Backend detect_best() {
#ifdef GGR_HAVE_AVX2
    if (__builtin_cpu_supports("avx2"))
        return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend g_backend = detect_best();

} // namespace

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
    if (b == Backend::scalar)
        return true;
#ifdef GGR_HAVE_AVX2
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() {
    return g_backend;
}

void force_backend(Backend b) {
    if (!backend_supported(b))
        fail(Errc::config_error, std::string("kernel backend not supported on this host: ") +
                                     backend_name(b));
    g_backend = b;
}

void reset_backend() {
    g_backend = detect_best();
}

void angle_cos_batch(const AngularSoA& a, size_t n, const AngularProbe& p, double* out) {
#ifdef GGR_HAVE_AVX2
    if (g_backend == Backend::avx2) {
        avx2::angle_cos_batch(a, n, p, out);
        return;
    }
#endif
    scalar::angle_cos_batch(a, n, p, out);
}

void hyper_arg_batch(const AngularSoA& a, const RadialSoA& r, size_t n, const AngularProbe& p,
                     const RadialProbe& q, double* out) {
#ifdef GGR_HAVE_AVX2
    if (g_backend == Backend::avx2) {
        avx2::hyper_arg_batch(a, r, n, p, q, out);
        return;
    }
#endif
    scalar::hyper_arg_batch(a, r, n, p, q, out);
}

AngularProbe AngularProbe::from(const GeoPoint& p) {
    return {std::cos(p.theta), std::sin(p.theta), std::cos(p.phi), std::sin(p.phi)};
}

RadialProbe RadialProbe::from(double r) {
    return {std::cosh(r), std::sinh(r)};
}

void CoordTable::reserve(size_t n) {
    ct_.reserve(n);
    st_.reserve(n);
    cp_.reserve(n);
    sp_.reserve(n);
    if (hyperbolic_) {
        ch_.reserve(n);
        sh_.reserve(n);
    }
}

void CoordTable::push_back(const Address& a) {
    assert(a.is_hyperbolic() == hyperbolic_);
    const AngularProbe ap = AngularProbe::from(a.angular());
    ct_.push_back(ap.ct);
    st_.push_back(ap.st);
    cp_.push_back(ap.cp);
    sp_.push_back(ap.sp);
    if (hyperbolic_) {
        const RadialProbe rp = RadialProbe::from(a.radius());
        ch_.push_back(rp.ch);
        sh_.push_back(rp.sh);
    }
}

CoordTable::Probe CoordTable::make_probe(const Address& target) const {
    assert(target.is_hyperbolic() == hyperbolic_);
    Probe p;
    p.ang = AngularProbe::from(target.angular());
    p.rad = hyperbolic_ ? RadialProbe::from(target.radius()) : RadialProbe{1.0, 0.0};
    return p;
}

void CoordTable::distance_keys(const Probe& p, double* out) const {
    const size_t n = size();
    if (hyperbolic_) {
        hyper_arg_batch(angular_view(), radial_view(), n, p.ang, p.rad, out);
    } else {
        angle_cos_batch(angular_view(), n, p.ang, out);
        for (size_t i = 0; i < n; ++i) // smaller key = closer; negation is exact
            out[i] = -out[i];
    }
}

double CoordTable::key_of(size_t i, const Probe& p) const {
    const AngularSoA a{ct_.data() + i, st_.data() + i, cp_.data() + i, sp_.data() + i};
    double key;
    if (hyperbolic_) {
        const RadialSoA r{ch_.data() + i, sh_.data() + i};
        scalar::hyper_arg_batch(a, r, 1, p.ang, p.rad, &key);
    } else {
        scalar::angle_cos_batch(a, 1, p.ang, &key);
        key = -key;
    }
    return key;
}

double CoordTable::key_to_distance(double key) const {
    if (hyperbolic_)
        return std::acosh(key);
    return kEarthRadiusKm * std::acos(-key);
}

} // namespace ggr::kernels
