#pragma once

#include "prizecorr/normal.hpp"

namespace prizecorr {

/// Parameters of the conditional citation-score distribution for selected
/// individuals: correlation r between latent rating and observed score, and
/// the rating threshold x_c that defines selection (x > x_c).
struct TailCondition {
    double r;
    double x_c;

    void validate() const {
        if (!(r > -1.0 && r < 1.0))
            throw domain_error("TailCondition: r must lie strictly inside (-1, 1)");
        if (!std::isfinite(x_c)) throw domain_error("TailCondition: x_c must be finite");
    }
};

/// Standard bivariate normal density with correlation r.
double bivariate_density(double x, double y, double r);

/// p(y | x > x_c) = phi(y) * S((x_c - r*y)/sqrt(1-r^2)) / S(x_c).
double conditional_density(double y, const TailCondition& cond);

/// log of conditional_density, finite across the whole admissible range
/// (uses log_normal_sf so deep tails do not underflow).
double log_conditional_density(double y, const TailCondition& cond);

/// p(y > y_c | x > x_c): quadrature of the conditional density over
/// [y_c, half_width]. Monotone nondecreasing in r for y_c, x_c > 0.
double tail_exceedance(double y_c, const TailCondition& cond,
                       const QuadratureSpec& spec = {});

/// p(y <= y_c | x > x_c), integrated directly so a small complement keeps
/// absolute accuracy. Used for the censored likelihood term.
double tail_deceedance(double y_c, const TailCondition& cond,
                       const QuadratureSpec& spec = {});

/// Solves tail_exceedance(y_c, {r, x_c}) = target for r in (0, 1) by
/// bisection with secant refinement. Throws no_solution_error when the
/// target lies outside [S(y_c), limit as r -> 1).
double invert_exceedance_for_r(double y_c, double x_c, double target,
                               const QuadratureSpec& spec = {});

/// Model-predicted TPR - FPR when the sieve size equals the winner count
/// (both thresholds at cond.x_c): gap = p - f*(1-p)/(1-f) with
/// p = tail_exceedance(x_c) and f the winner fraction.
double expected_tpr_fpr_gap(const TailCondition& cond, double winner_fraction,
                            const QuadratureSpec& spec = {});

}  // namespace prizecorr
