#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "prizecorr/errors.hpp"

namespace prizecorr {

/// Controls the adaptive quadrature used throughout the library. Infinite
/// integrals over standard-normal integrands are truncated at
/// [-half_width, half_width]; the mass beyond |z| = 8 is below 1e-15.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double half_width = 8.0;
    int max_subdivisions = 4096;

    void validate() const {
        if (!(abs_tol > 0.0))
            throw domain_error("QuadratureSpec: abs_tol must be > 0");
        if (!(half_width >= 6.0))
            throw domain_error("QuadratureSpec: half_width must be >= 6");
        if (max_subdivisions < 16)
            throw domain_error("QuadratureSpec: max_subdivisions must be >= 16");
    }
};

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal CDF, computed via the complementary error function so the
/// tails stay relatively accurate out to |z| ~ 37.
double normal_cdf(double z);

/// Upper tail S(z) = 1 - Phi(z) = Phi(-z), without cancellation for z > 0.
double normal_sf(double z);

/// log S(z), finite for all finite z (asymptotic expansion past z = 35 where
/// erfc would underflow).
double log_normal_sf(double z);

/// Inverse CDF. Wichura's AS241 rational approximation refined by one Newton
/// step. Requires 0 < p < 1.
double normal_quantile(double p);

/// Ordinal rank k in a pool of N maps to the z-score of the (1 - k/N)
/// quantile. Rank 1 is the top of the list; rank = pool is rejected because
/// its quantile is 0.
double rank_to_z(std::uint64_t rank, std::uint64_t pool);

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = gk_wk[7] * fc;
    double g7 = gk_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk_nodes[i];
        const double fsum = f(c - dx) + f(c + dx);
        k15 += gk_wk[i] * fsum;
        if (i % 2 == 1) g7 += gk_wg[i / 2] * fsum;
    }
    value = k15 * h;
    err = std::fabs((k15 - g7) * h);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [lo, hi] to the spec's
/// absolute tolerance. Throws convergence_error (carrying the best estimate)
/// when the subdivision budget runs out.
template <class F>
double integrate(const F& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(lo <= hi)) throw domain_error("integrate: lo must be <= hi");
    if (lo == hi) return 0.0;

    struct Segment {
        double a, b, value, err;
    };
    std::vector<Segment> stack;
    Segment s0{lo, hi, 0.0, 0.0};
    detail::gk15(f, lo, hi, s0.value, s0.err);
    stack.push_back(s0);

    const double span = hi - lo;
    double sum = 0.0;
    int subdivisions = 0;
    double pending_best = 0.0;  // running total over still-open segments
    while (!stack.empty()) {
        Segment s = stack.back();
        stack.pop_back();
        if (s.err <= spec.abs_tol * ((s.b - s.a) / span) || (s.b - s.a) < 1e-14 * span) {
            sum += s.value;
            continue;
        }
        if (++subdivisions > spec.max_subdivisions) {
            pending_best = s.value;
            for (const Segment& r : stack) pending_best += r.value;
            throw convergence_error("integrate: subdivision budget exhausted",
                                    sum + pending_best);
        }
        const double mid = 0.5 * (s.a + s.b);
        Segment left{s.a, mid, 0.0, 0.0}, right{mid, s.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        stack.push_back(left);
        stack.push_back(right);
    }
    return sum;
}

}  // namespace prizecorr
