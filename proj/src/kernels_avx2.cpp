#include <immintrin.h>

#include "ggr/kernels.hpp"

// AVX2 backend: 4 doubles per lane group, same per-lane expression tree as
// the scalar reference (mul/add only, no FMA), so results are bit-identical.
// The remainder tail falls through to the scalar kernel.

namespace ggr::kernels::avx2 {

namespace {

struct DotResult {
    __m256d dot;
    __m256d eq_ang; // all-ones lanes where the angular values equal the probe's
};

inline DotResult angle_dot_lanes(const AngularSoA& a, size_t i, const __m256d& pct,
                                 const __m256d& pst, const __m256d& pcp, const __m256d& psp) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d minus_one = _mm256_set1_pd(-1.0);

    const __m256d ct = _mm256_loadu_pd(a.ct + i);
    const __m256d st = _mm256_loadu_pd(a.st + i);
    const __m256d cp = _mm256_loadu_pd(a.cp + i);
    const __m256d sp = _mm256_loadu_pd(a.sp + i);

    const __m256d g = _mm256_add_pd(_mm256_mul_pd(cp, pcp), _mm256_mul_pd(sp, psp));
    __m256d dot =
        _mm256_add_pd(_mm256_mul_pd(ct, pct), _mm256_mul_pd(_mm256_mul_pd(st, pst), g));
    dot = _mm256_min_pd(one, _mm256_max_pd(minus_one, dot));

    const __m256d eq_ang = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(ct, pct, _CMP_EQ_OQ), _mm256_cmp_pd(st, pst, _CMP_EQ_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(cp, pcp, _CMP_EQ_OQ), _mm256_cmp_pd(sp, psp, _CMP_EQ_OQ)));
    dot = _mm256_blendv_pd(dot, one, eq_ang);
    return {dot, eq_ang};
}

} // namespace

void angle_cos_batch(const AngularSoA& a, size_t n, const AngularProbe& p, double* out) {
    const __m256d pct = _mm256_set1_pd(p.ct);
    const __m256d pst = _mm256_set1_pd(p.st);
    const __m256d pcp = _mm256_set1_pd(p.cp);
    const __m256d psp = _mm256_set1_pd(p.sp);

    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, angle_dot_lanes(a, i, pct, pst, pcp, psp).dot);

    if (i < n) {
        const AngularSoA tail{a.ct + i, a.st + i, a.cp + i, a.sp + i};
        scalar::angle_cos_batch(tail, n - i, p, out + i);
    }
}

void hyper_arg_batch(const AngularSoA& a, const RadialSoA& r, size_t n, const AngularProbe& p,
                     const RadialProbe& q, double* out) {
    const __m256d pct = _mm256_set1_pd(p.ct);
    const __m256d pst = _mm256_set1_pd(p.st);
    const __m256d pcp = _mm256_set1_pd(p.cp);
    const __m256d psp = _mm256_set1_pd(p.sp);
    const __m256d qch = _mm256_set1_pd(q.ch);
    const __m256d qsh = _mm256_set1_pd(q.sh);
    const __m256d one = _mm256_set1_pd(1.0);

    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const DotResult d = angle_dot_lanes(a, i, pct, pst, pcp, psp);

        const __m256d ch = _mm256_loadu_pd(r.ch + i);
        const __m256d sh = _mm256_loadu_pd(r.sh + i);
        __m256d arg =
            _mm256_sub_pd(_mm256_mul_pd(ch, qch), _mm256_mul_pd(_mm256_mul_pd(sh, qsh), d.dot));
        arg = _mm256_max_pd(one, arg);

        const __m256d eq_all = _mm256_and_pd(
            d.eq_ang, _mm256_and_pd(_mm256_cmp_pd(ch, qch, _CMP_EQ_OQ),
                                    _mm256_cmp_pd(sh, qsh, _CMP_EQ_OQ)));
        arg = _mm256_blendv_pd(arg, one, eq_all);
        _mm256_storeu_pd(out + i, arg);
    }

    if (i < n) {
        const AngularSoA atail{a.ct + i, a.st + i, a.cp + i, a.sp + i};
        const RadialSoA rtail{r.ch + i, r.sh + i};
        scalar::hyper_arg_batch(atail, rtail, n - i, p, q, out + i);
    }
}

} // namespace ggr::kernels::avx2
