#include <algorithm>

#include "ggr/kernels.hpp"

// Scalar reference kernels.  The AVX2 backend mirrors this expression tree
// operation for operation; any change here must be applied there as well.

namespace ggr::kernels::scalar {

void angle_cos_batch(const AngularSoA& a, size_t n, const AngularProbe& p, double* out) {
    for (size_t i = 0; i < n; ++i) {
        const double g = a.cp[i] * p.cp + a.sp[i] * p.sp;
        double dot = a.ct[i] * p.ct + (a.st[i] * p.st) * g;
        dot = std::min(1.0, std::max(-1.0, dot));
        if (a.ct[i] == p.ct && a.st[i] == p.st && a.cp[i] == p.cp && a.sp[i] == p.sp)
            dot = 1.0;
        out[i] = dot;
    }
}

void hyper_arg_batch(const AngularSoA& a, const RadialSoA& r, size_t n, const AngularProbe& p,
                     const RadialProbe& q, double* out) {
    for (size_t i = 0; i < n; ++i) {
        const double g = a.cp[i] * p.cp + a.sp[i] * p.sp;
        double dot = a.ct[i] * p.ct + (a.st[i] * p.st) * g;
        dot = std::min(1.0, std::max(-1.0, dot));
        const bool eq_ang =
            a.ct[i] == p.ct && a.st[i] == p.st && a.cp[i] == p.cp && a.sp[i] == p.sp;
        if (eq_ang)
            dot = 1.0;
        double arg = r.ch[i] * q.ch - (r.sh[i] * q.sh) * dot;
        arg = std::max(1.0, arg);
        if (eq_ang && r.ch[i] == q.ch && r.sh[i] == q.sh)
            arg = 1.0;
        out[i] = arg;
    }
}

} // namespace ggr::kernels::scalar
