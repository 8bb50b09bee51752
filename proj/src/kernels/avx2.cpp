// AVX2 lane for the batch kernels. Same math as the scalar reference:
// Cody's rational segments for erfc, Cephes-style exp/log, AS241 + one
// Newton step for the normal quantile. Equivalence against the scalar lane
// is enforced by tests/test_kernels.cpp.

#if defined(PRIZECORR_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstring>

#include "kernel_table.hpp"

namespace prizecorr::kernels::detail {

namespace {

inline __m256d vd(double v) { return _mm256_set1_pd(v); }

inline __m256d fma(__m256d a, __m256d b, __m256d c) { return _mm256_fmadd_pd(a, b, c); }

inline __m256d select(__m256d mask, __m256d a, __m256d b) {
    return _mm256_blendv_pd(b, a, mask);
}

inline __m256d vabs(__m256d x) {
    return _mm256_andnot_pd(vd(-0.0), x);
}

// exp(x) for x in [-708.39, 709.78]; lanes below the range return 0.
__m256d exp_pd(__m256d x) {
    const __m256d underflow = _mm256_cmp_pd(x, vd(-708.39), _CMP_LT_OQ);
    __m256d xc = _mm256_max_pd(x, vd(-708.39));
    xc = _mm256_min_pd(xc, vd(709.78));

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, vd(1.4426950408889634074)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, vd(6.93145751953125e-1), xc);
    r = _mm256_fnmadd_pd(n, vd(1.42860682030941723212e-6), r);

    const __m256d z = _mm256_mul_pd(r, r);
    __m256d p = fma(vd(1.26177193074810590878e-4), z, vd(3.02994407707441961300e-2));
    p = fma(p, z, vd(9.99999999999999999910e-1));
    const __m256d rp = _mm256_mul_pd(r, p);
    __m256d q = fma(vd(3.00198505138664455042e-6), z, vd(2.52448340349684104192e-3));
    q = fma(q, z, vd(2.27265548208155028766e-1));
    q = fma(q, z, vd(2.00000000000000000005e0));
    const __m256d frac = _mm256_div_pd(rp, _mm256_sub_pd(q, rp));
    const __m256d e = fma(vd(2.0), frac, vd(1.0));

    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    const __m256d scale = _mm256_castsi256_pd(bits);

    return _mm256_andnot_pd(underflow, _mm256_mul_pd(e, scale));
}

// log(x) for positive normal x.
__m256d log_pd(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exp_bits =
        _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff));
    // int64 -> double for small nonnegative values
    const __m256d exp_d = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_set1_epi64x(0x4330000000000000))),
        vd(0x1.0p52));
    __m256d e = _mm256_sub_pd(exp_d, vd(1022.0));

    const __m256i mant = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
        _mm256_set1_epi64x(0x3fe0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant);  // [0.5, 1)

    const __m256d lo = _mm256_cmp_pd(m, vd(0.70710678118654752440), _CMP_LT_OQ);
    m = select(lo, _mm256_add_pd(m, m), m);
    e = select(lo, _mm256_sub_pd(e, vd(1.0)), e);
    const __m256d y = _mm256_sub_pd(m, vd(1.0));

    const __m256d z = _mm256_mul_pd(y, y);
    __m256d p = fma(vd(1.01875663804580931796e-4), y, vd(4.97494994976747001425e-1));
    p = fma(p, y, vd(4.70579119878881725854e0));
    p = fma(p, y, vd(1.44989225341610930846e1));
    p = fma(p, y, vd(1.79368678507819816313e1));
    p = fma(p, y, vd(7.70838733755885391666e0));
    __m256d q = _mm256_add_pd(y, vd(1.12873587189167450590e1));
    q = fma(q, y, vd(4.52279145837532221105e1));
    q = fma(q, y, vd(8.29875266912776603211e1));
    q = fma(q, y, vd(7.11544750618563894466e1));
    q = fma(q, y, vd(2.31251620126765340583e1));

    __m256d w = _mm256_mul_pd(_mm256_mul_pd(y, z), _mm256_div_pd(p, q));
    w = _mm256_fnmadd_pd(e, vd(2.121944400546905827679e-4), w);
    w = _mm256_fnmadd_pd(vd(0.5), z, w);
    w = _mm256_add_pd(w, y);
    return fma(e, vd(0.693359375), w);
}

// Cody's erfc. Relative accuracy ~1e-15; underflows to 0 past x ~ 26.6 and
// saturates at 2 on the negative side.
__m256d erfc_pd(__m256d x) {
    const __m256d ax = vabs(x);

    // |x| <= 0.46875: erfc = 1 - erf, erf via rational in x^2
    const __m256d z = _mm256_mul_pd(x, x);
    __m256d na = _mm256_mul_pd(vd(1.85777706184603153e-1), z);
    __m256d da = z;
    na = _mm256_mul_pd(_mm256_add_pd(na, vd(3.16112374387056560e0)), z);
    da = _mm256_mul_pd(_mm256_add_pd(da, vd(2.36012909523441209e1)), z);
    na = _mm256_mul_pd(_mm256_add_pd(na, vd(1.13864154151050156e2)), z);
    da = _mm256_mul_pd(_mm256_add_pd(da, vd(2.44024637934444173e2)), z);
    na = _mm256_mul_pd(_mm256_add_pd(na, vd(3.77485237685302021e2)), z);
    da = _mm256_mul_pd(_mm256_add_pd(da, vd(1.28261652607737228e3)), z);
    const __m256d erf_small =
        _mm256_div_pd(_mm256_mul_pd(x, _mm256_add_pd(na, vd(3.20937758913846947e3))),
                      _mm256_add_pd(da, vd(2.84423683343917062e3)));
    const __m256d v_a = _mm256_sub_pd(vd(1.0), erf_small);

    // shared exp factor exp(-ax^2), split at 1/16 granularity
    const __m256d ysq = _mm256_mul_pd(
        _mm256_round_pd(_mm256_mul_pd(ax, vd(16.0)), _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC),
        vd(0.0625));
    const __m256d del = _mm256_mul_pd(_mm256_sub_pd(ax, ysq), _mm256_add_pd(ax, ysq));
    const __m256d expfac = _mm256_mul_pd(
        exp_pd(_mm256_xor_pd(_mm256_mul_pd(ysq, ysq), vd(-0.0))), exp_pd(_mm256_xor_pd(del, vd(-0.0))));

    // 0.46875 < |x| <= 4: rational in |x|
    __m256d nb = _mm256_mul_pd(vd(2.15311535474403846e-8), ax);
    __m256d db = ax;
    nb = _mm256_mul_pd(_mm256_add_pd(nb, vd(5.64188496988670089e-1)), ax);
    db = _mm256_mul_pd(_mm256_add_pd(db, vd(1.57449261107098347e1)), ax);
    nb = _mm256_mul_pd(_mm256_add_pd(nb, vd(8.88314979438837594e0)), ax);
    db = _mm256_mul_pd(_mm256_add_pd(db, vd(1.17693950891312499e2)), ax);
    nb = _mm256_mul_pd(_mm256_add_pd(nb, vd(6.61191906371416295e1)), ax);
    db = _mm256_mul_pd(_mm256_add_pd(db, vd(5.37181101862009858e2)), ax);
    nb = _mm256_mul_pd(_mm256_add_pd(nb, vd(2.98635138197400131e2)), ax);
    db = _mm256_mul_pd(_mm256_add_pd(db, vd(1.62138957456669019e3)), ax);
    nb = _mm256_mul_pd(_mm256_add_pd(nb, vd(8.81952221241769090e2)), ax);
    db = _mm256_mul_pd(_mm256_add_pd(db, vd(3.29079923573345963e3)), ax);
    nb = _mm256_mul_pd(_mm256_add_pd(nb, vd(1.71204761263407058e3)), ax);
    db = _mm256_mul_pd(_mm256_add_pd(db, vd(4.36261909014324716e3)), ax);
    nb = _mm256_mul_pd(_mm256_add_pd(nb, vd(2.05107837782607147e3)), ax);
    db = _mm256_mul_pd(_mm256_add_pd(db, vd(3.43936767414372164e3)), ax);
    const __m256d v_b = _mm256_mul_pd(
        expfac, _mm256_div_pd(_mm256_add_pd(nb, vd(1.23033935479799725e3)),
                              _mm256_add_pd(db, vd(1.23033935480374942e3))));

    // |x| > 4: asymptotic rational in 1/x^2
    const __m256d zi = _mm256_div_pd(vd(1.0), _mm256_mul_pd(ax, ax));
    __m256d nc = _mm256_mul_pd(vd(1.63153871373020978e-2), zi);
    __m256d dc = zi;
    nc = _mm256_mul_pd(_mm256_add_pd(nc, vd(3.05326634961232344e-1)), zi);
    dc = _mm256_mul_pd(_mm256_add_pd(dc, vd(2.56852019228982242e0)), zi);
    nc = _mm256_mul_pd(_mm256_add_pd(nc, vd(3.60344899949804439e-1)), zi);
    dc = _mm256_mul_pd(_mm256_add_pd(dc, vd(1.87295284992346047e0)), zi);
    nc = _mm256_mul_pd(_mm256_add_pd(nc, vd(1.25781726111229246e-1)), zi);
    dc = _mm256_mul_pd(_mm256_add_pd(dc, vd(5.27905102951428412e-1)), zi);
    nc = _mm256_mul_pd(_mm256_add_pd(nc, vd(1.60837851487422766e-2)), zi);
    dc = _mm256_mul_pd(_mm256_add_pd(dc, vd(6.05183413124413191e-2)), zi);
    const __m256d rc =
        _mm256_mul_pd(zi, _mm256_div_pd(_mm256_add_pd(nc, vd(6.58749161529837803e-4)),
                                        _mm256_add_pd(dc, vd(2.33520497626869185e-3))));
    const __m256d v_c = _mm256_div_pd(
        _mm256_mul_pd(expfac, _mm256_sub_pd(vd(5.6418958354775628695e-1), rc)), ax);

    const __m256d far = _mm256_cmp_pd(ax, vd(4.0), _CMP_GT_OQ);
    __m256d v_pos = select(far, v_c, v_b);
    const __m256d neg = _mm256_cmp_pd(x, vd(0.0), _CMP_LT_OQ);
    const __m256d v_bc = select(neg, _mm256_sub_pd(vd(2.0), v_pos), v_pos);

    const __m256d small = _mm256_cmp_pd(ax, vd(0.46875), _CMP_LE_OQ);
    return select(small, v_a, v_bc);
}

const __m256d kInvSqrt2 = _mm256_set1_pd(0.7071067811865475244008443621048490);
const __m256d kInvSqrt2Pi = _mm256_set1_pd(0.3989422804014326779399460599343819);

inline __m256d cdf_pd(__m256d z) {
    return _mm256_mul_pd(vd(0.5), erfc_pd(_mm256_mul_pd(z, _mm256_xor_pd(kInvSqrt2, vd(-0.0)))));
}

inline __m256d pdf_pd(__m256d z) {
    return _mm256_mul_pd(kInvSqrt2Pi,
                         exp_pd(_mm256_mul_pd(vd(-0.5), _mm256_mul_pd(z, z))));
}

// AS241 with one Newton refinement, vectorized across all three segments.
__m256d quantile_pd(__m256d p) {
    const __m256d q = _mm256_sub_pd(p, vd(0.5));

    // central segment
    const __m256d rc = _mm256_fnmadd_pd(q, q, vd(0.180625));
    __m256d a = fma(vd(2.5090809287301226727e3), rc, vd(3.3430575583588128105e4));
    a = fma(a, rc, vd(6.7265770927008700853e4));
    a = fma(a, rc, vd(4.5921953931549871457e4));
    a = fma(a, rc, vd(1.3731693765509461125e4));
    a = fma(a, rc, vd(1.9715909503065514427e3));
    a = fma(a, rc, vd(1.3314166789178437745e2));
    a = fma(a, rc, vd(3.3871328727963666080e0));
    __m256d b = fma(vd(5.2264952788528545610e3), rc, vd(2.8729085735721942674e4));
    b = fma(b, rc, vd(3.9307895800092710610e4));
    b = fma(b, rc, vd(2.1213794301586595867e4));
    b = fma(b, rc, vd(5.3941960214247511077e3));
    b = fma(b, rc, vd(6.8718700749205790830e2));
    b = fma(b, rc, vd(4.2313330701600911252e1));
    b = fma(b, rc, vd(1.0));
    const __m256d z_central = _mm256_mul_pd(q, _mm256_div_pd(a, b));

    // tail segments on r = sqrt(-log(min(p, 1-p)))
    const __m256d pm = _mm256_min_pd(p, _mm256_sub_pd(vd(1.0), p));
    const __m256d rt =
        _mm256_sqrt_pd(_mm256_xor_pd(log_pd(pm), vd(-0.0)));

    const __m256d rm = _mm256_sub_pd(rt, vd(1.6));
    __m256d c = fma(vd(7.74545014278341407640e-4), rm, vd(2.27238449892691845833e-2));
    c = fma(c, rm, vd(2.41780725177450611770e-1));
    c = fma(c, rm, vd(1.27045825245236838258e0));
    c = fma(c, rm, vd(3.64784832476320460504e0));
    c = fma(c, rm, vd(5.76949722146069140550e0));
    c = fma(c, rm, vd(4.63033784615654529590e0));
    c = fma(c, rm, vd(1.42343711074968357734e0));
    __m256d d = fma(vd(1.05075007164441684324e-9), rm, vd(5.47593808499534494600e-4));
    d = fma(d, rm, vd(1.51986665636164571966e-2));
    d = fma(d, rm, vd(1.48103976427480074590e-1));
    d = fma(d, rm, vd(6.89767334985100004550e-1));
    d = fma(d, rm, vd(1.67638483018380384940e0));
    d = fma(d, rm, vd(2.05319162663775882187e0));
    d = fma(d, rm, vd(1.0));
    const __m256d z_mid = _mm256_div_pd(c, d);

    const __m256d rf = _mm256_sub_pd(rt, vd(5.0));
    __m256d ee = fma(vd(2.01033439929228813265e-7), rf, vd(2.71155556874348757815e-5));
    ee = fma(ee, rf, vd(1.24266094738807843860e-3));
    ee = fma(ee, rf, vd(2.65321895265761230930e-2));
    ee = fma(ee, rf, vd(2.96560571828504891230e-1));
    ee = fma(ee, rf, vd(1.78482653991729133580e0));
    ee = fma(ee, rf, vd(5.46378491116411436990e0));
    ee = fma(ee, rf, vd(6.65790464350110377720e0));
    __m256d ff = fma(vd(2.04426310338993978564e-15), rf, vd(1.42151175831644588870e-7));
    ff = fma(ff, rf, vd(1.84631831751005468180e-5));
    ff = fma(ff, rf, vd(7.86869131145613259100e-4));
    ff = fma(ff, rf, vd(1.48753612908506148525e-2));
    ff = fma(ff, rf, vd(1.36929880922735805310e-1));
    ff = fma(ff, rf, vd(5.99832206555887937690e-1));
    ff = fma(ff, rf, vd(1.0));
    const __m256d z_far = _mm256_div_pd(ee, ff);

    const __m256d far_mask = _mm256_cmp_pd(rt, vd(5.0), _CMP_GT_OQ);
    __m256d z_tail = select(far_mask, z_far, z_mid);
    const __m256d neg_mask = _mm256_cmp_pd(q, vd(0.0), _CMP_LT_OQ);
    z_tail = select(neg_mask, _mm256_xor_pd(z_tail, vd(-0.0)), z_tail);

    const __m256d central_mask =
        _mm256_cmp_pd(vabs(q), vd(0.425), _CMP_LE_OQ);
    __m256d z = select(central_mask, z_central, z_tail);

    // Newton step
    const __m256d err = _mm256_sub_pd(cdf_pd(z), p);
    const __m256d den = pdf_pd(z);
    const __m256d ok = _mm256_cmp_pd(den, vd(0.0), _CMP_GT_OQ);
    const __m256d step = _mm256_div_pd(err, den);
    return select(ok, _mm256_sub_pd(z, step), z);
}

template <class VecOp>
void map_kernel(const double* in, double* out, std::size_t n, VecOp op, double pad) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(in + i)));
    if (i < n) {
        alignas(32) double buf[4] = {pad, pad, pad, pad};
        std::memcpy(buf, in + i, (n - i) * sizeof(double));
        alignas(32) double res[4];
        _mm256_store_pd(res, op(_mm256_load_pd(buf)));
        std::memcpy(out + i, res, (n - i) * sizeof(double));
    }
}

void pdf_avx2(const double* z, double* out, std::size_t n) {
    map_kernel(z, out, n, [](__m256d v) { return pdf_pd(v); }, 0.0);
}

void cdf_avx2(const double* z, double* out, std::size_t n) {
    map_kernel(z, out, n, [](__m256d v) { return cdf_pd(v); }, 0.0);
}

void sf_avx2(const double* z, double* out, std::size_t n) {
    map_kernel(z, out, n,
               [](__m256d v) {
                   return _mm256_mul_pd(vd(0.5), erfc_pd(_mm256_mul_pd(v, kInvSqrt2)));
               },
               0.0);
}

void quantile_avx2(const double* p, double* out, std::size_t n) {
    map_kernel(p, out, n, [](__m256d v) { return quantile_pd(v); }, 0.5);
}

void couple_avx2(const double* x, const double* s, double r, double* y, std::size_t n) {
    const double w = std::sqrt(1.0 - r * r);
    const __m256d vr = vd(r);
    const __m256d vw = vd(w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = fma(vr, _mm256_loadu_pd(x + i),
                               _mm256_mul_pd(vw, _mm256_loadu_pd(s + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = r * x[i] + w * s[i];
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable t{pdf_avx2, cdf_avx2, sf_avx2, quantile_avx2, couple_avx2};
    return t;
}

}  // namespace prizecorr::kernels::detail

#endif  // PRIZECORR_HAVE_AVX2
