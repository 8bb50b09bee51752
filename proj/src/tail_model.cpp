#include "prizecorr/tail_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace prizecorr {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559006;

}  // namespace

double bivariate_density(double x, double y, double r) {
    if (!(std::fabs(r) < 1.0))
        throw domain_error("bivariate_density: |r| must be < 1");
    if (!std::isfinite(x) || !std::isfinite(y))
        throw domain_error("bivariate_density: non-finite input");
    if (x < y) std::swap(x, y);  // canonical order keeps (x,y) swap symmetry exact
    const double omr2 = 1.0 - r * r;
    const double quad = (x * x - 2.0 * r * x * y + y * y) / (2.0 * omr2);
    return std::exp(-quad) / (kTwoPi * std::sqrt(omr2));
}

double conditional_density(double y, const TailCondition& cond) {
    cond.validate();
    if (!std::isfinite(y)) throw domain_error("conditional_density: non-finite y");
    const double w = std::sqrt(1.0 - cond.r * cond.r);
    const double t = (cond.x_c - cond.r * y) / w;
    return normal_pdf(y) * normal_sf(t) / normal_sf(cond.x_c);
}

double log_conditional_density(double y, const TailCondition& cond) {
    cond.validate();
    if (!std::isfinite(y)) throw domain_error("log_conditional_density: non-finite y");
    const double w = std::sqrt(1.0 - cond.r * cond.r);
    const double t = (cond.x_c - cond.r * y) / w;
    return std::log(normal_pdf(y)) + log_normal_sf(t) - log_normal_sf(cond.x_c);
}

double tail_exceedance(double y_c, const TailCondition& cond, const QuadratureSpec& spec) {
    cond.validate();
    if (!std::isfinite(y_c)) throw domain_error("tail_exceedance: non-finite y_c");
    if (y_c >= spec.half_width) return 0.0;
    const double lo = std::max(y_c, -spec.half_width);
    const double p =
        integrate([&](double y) { return conditional_density(y, cond); }, lo,
                  spec.half_width, spec);
    return std::clamp(p, 0.0, 1.0);
}

double tail_deceedance(double y_c, const TailCondition& cond, const QuadratureSpec& spec) {
    cond.validate();
    if (!std::isfinite(y_c)) throw domain_error("tail_deceedance: non-finite y_c");
    if (y_c <= -spec.half_width) return 0.0;
    const double hi = std::min(y_c, spec.half_width);
    const double p =
        integrate([&](double y) { return conditional_density(y, cond); }, -spec.half_width,
                  hi, spec);
    return std::clamp(p, 0.0, 1.0);
}

double invert_exceedance_for_r(double y_c, double x_c, double target,
                               const QuadratureSpec& spec) {
    if (!std::isfinite(y_c) || !std::isfinite(x_c))
        throw domain_error("invert_exceedance_for_r: thresholds must be finite");
    if (!(target >= 0.0 && target <= 1.0))
        throw domain_error("invert_exceedance_for_r: target must be a probability");

    constexpr double kRmax = 0.999999;
    const auto f = [&](double r) { return tail_exceedance(y_c, TailCondition{r, x_c}, spec); };

    const double p0 = f(0.0);  // = S(y_c): the attainable minimum for positive association
    // r -> 1 limit: winners occupy the x-tail, so y -> x and the exceedance
    // tends to S(max(x_c, y_c)) / S(x_c).
    const double p1_limit =
        std::min(1.0, std::exp(log_normal_sf(std::max(x_c, y_c)) - log_normal_sf(x_c)));
    const double p1 = f(kRmax);

    const double slack = 1e-9;
    if (target < p0 - slack || target > p1 + slack) {
        std::ostringstream msg;
        msg << "invert_exceedance_for_r: target " << target
            << " outside the attainable range [" << p0 << ", " << p1
            << "] for r in [0, " << kRmax << "] (limit as r -> 1: " << p1_limit << ")";
        throw no_solution_error(msg.str(), p0, p1);
    }
    if (target <= p0) return 0.0;
    if (target >= p1) return kRmax;

    // Bisection on the monotone map, finished by a few secant steps.
    double lo = 0.0, hi = kRmax;
    double flo = p0 - target, fhi = p1 - target;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid) - target;
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
        if (std::fabs(fmid) < 1e-7 || hi - lo < 1e-12) break;
    }
    double a = lo, b = hi, fa = flo, fb = fhi;
    double best = 0.5 * (a + b);
    for (int i = 0; i < 20; ++i) {
        if (fb == fa) break;
        const double c = b - fb * (b - a) / (fb - fa);
        if (!(c > 0.0 && c < kRmax)) break;
        const double fc = f(c) - target;
        best = c;
        if (std::fabs(fc) < 1e-9) break;
        a = b;
        fa = fb;
        b = c;
        fb = fc;
    }
    if (std::fabs(f(best) - target) > 1e-6)
        throw convergence_error("invert_exceedance_for_r: root refinement stalled", best);
    return best;
}

double expected_tpr_fpr_gap(const TailCondition& cond, double winner_fraction,
                            const QuadratureSpec& spec) {
    cond.validate();
    if (!(winner_fraction > 0.0 && winner_fraction < 1.0))
        throw domain_error("expected_tpr_fpr_gap: winner_fraction must lie in (0, 1)");
    const double p = tail_exceedance(cond.x_c, cond, spec);
    const double f = winner_fraction;
    return p - f * (1.0 - p) / (1.0 - f);
}

}  // namespace prizecorr
