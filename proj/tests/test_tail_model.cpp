#include <doctest.h>

#include <cmath>
#include <vector>

#include "prizecorr/normal.hpp"
#include "prizecorr/simulation.hpp"
#include "prizecorr/tail_model.hpp"
#include "support/oracles.hpp"

using namespace prizecorr;

TEST_SUITE("tail_model") {

TEST_CASE("bivariate density basics") {
    CHECK(std::fabs(bivariate_density(0, 0, 0) - 0.15915494309189534) < 1e-15);  // 1/(2*pi)
    for (double x = -2.0; x <= 2.0; x += 0.5)
        for (double y = -2.0; y <= 2.0; y += 0.5)
            CHECK(std::fabs(bivariate_density(x, y, 0.0) - normal_pdf(x) * normal_pdf(y)) <
                  1e-15);
    // symmetry under (x, y) swap
    for (double r : {-0.8, -0.3, 0.5, 0.9})
        for (double x : {-1.7, 0.4, 2.2})
            for (double y : {-0.6, 1.3})
                CHECK(bivariate_density(x, y, r) == bivariate_density(y, x, r));
    CHECK_THROWS_AS(bivariate_density(0, 0, 1.0), domain_error);
    CHECK_THROWS_AS(bivariate_density(0, 0, -1.2), domain_error);
}

TEST_CASE("bivariate density normalizes and matches a direct exponent evaluation") {
    // 2-D quadrature oracle for the normalization at r = 0.5
    const double total = oracle::simpson2d(
        [](double x, double y) { return bivariate_density(x, y, 0.5); }, -8, 8, -8, 8, 600,
        600);
    CHECK(std::fabs(total - 1.0) < 1e-8);
    // pointwise check against an independently coded exponent formula
    const long double q = (1.0L - 2.0L * 0.5L * 1.0L * 1.0L + 1.0L) / (2.0L * 0.75L);
    const long double direct =
        oracle::exp_series(-q) / (2.0L * 3.14159265358979323846264L * std::sqrt(0.75L));
    CHECK(std::fabs(bivariate_density(1, 1, 0.5) - static_cast<double>(direct)) < 1e-14);
    CHECK(std::fabs(bivariate_density(1, 1, 0.5) - 0.09435389770895923) < 1e-15);
}

TEST_CASE("conditional density reduces to the marginal at r = 0") {
    for (double xc : {-1.0, 0.0, 2.38}) {
        const TailCondition cond{0.0, xc};
        for (double y = -4.0; y <= 4.0; y += 0.25)
            CHECK(std::fabs(conditional_density(y, cond) - normal_pdf(y)) <
                  1e-14 * normal_pdf(y) + 1e-300);
    }
}

TEST_CASE("conditional density normalizes across the r x x_c grid") {
    for (double r : {-0.9, -0.5, 0.0, 0.5, 0.63, 0.9}) {
        for (double xc : {0.0, 1.0, 2.38, 3.51}) {
            const TailCondition cond{r, xc};
            const double total = oracle::simpson(
                [&](double y) { return conditional_density(y, cond); }, -8.0, 8.0, 8192);
            CHECK(std::fabs(total - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("conditional mean equals r times the inverse Mills ratio") {
    const TailCondition cond{0.65, 2.38};
    const double mean = integrate(
        [&](double y) { return y * conditional_density(y, cond); }, -8.0, 8.0);
    // independent Mills ratio: phi(2.38) / S(2.38) with S from the Simpson oracle
    const double sf_oracle =
        oracle::simpson([](double t) { return normal_pdf(t); }, 2.38, 12.0, 8192);
    const double mills = oracle::normal_pdf_series(2.38) / sf_oracle;
    CHECK(std::fabs(mean - 0.65 * mills) < 1e-6);
    CHECK(std::fabs(mean - 1.7639299612019244) < 1e-9);
    CHECK(std::fabs(mills - 2.7137384018491144) < 1e-9);
}

TEST_CASE("tail condition validation") {
    CHECK_THROWS_AS(conditional_density(0.0, TailCondition{1.0, 2.0}), domain_error);
    CHECK_THROWS_AS(conditional_density(0.0, TailCondition{-1.0, 2.0}), domain_error);
    CHECK_THROWS_AS(
        conditional_density(0.0, TailCondition{0.5, std::numeric_limits<double>::infinity()}),
        domain_error);
}

TEST_CASE("exceedance reduces to the survival function at r = 0") {
    for (double yc : {-2.0, 0.0, 1.3, 2.38, 3.5})
        CHECK(std::fabs(tail_exceedance(yc, TailCondition{0.0, 2.0}) - normal_sf(yc)) < 1e-9);
}

TEST_CASE("exceedance reproduces the two worked tail probabilities") {
    // 5-of-25 overlap case: p(y > x_c | x > x_c) = 0.2 at r = 0.63
    CHECK(std::fabs(tail_exceedance(2.38, TailCondition{0.63, 2.38}) - 0.20) < 0.005);
    CHECK(std::fabs(tail_exceedance(2.38, TailCondition{0.63, 2.38}) - 0.20057619829748669) <
          1e-8);
    // 6-of-22 top-list case: p = 6/22 at r = 0.48
    CHECK(std::fabs(tail_exceedance(2.35, TailCondition{0.48, 3.51}) - 6.0 / 22.0) < 0.005);
    CHECK(std::fabs(tail_exceedance(2.35, TailCondition{0.48, 3.51}) - 0.26885590801583890) <
          1e-8);
}

TEST_CASE("exceedance is strictly increasing in r") {
    double prev = -1.0;
    for (double r = 0.0; r <= 0.99 + 1e-12; r += 0.01) {
        const double p = tail_exceedance(2.38, TailCondition{r, 2.38});
        CHECK(p > prev);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        prev = p;
    }
}

TEST_CASE("exceedance agrees with the 2-D joint-density quadrature") {
    for (double r : {0.3, 0.63, 0.85}) {
        for (auto [xc, yc] : std::vector<std::pair<double, double>>{
                 {2.38, 2.38}, {3.51, 2.35}, {1.0, 0.5}}) {
            const double joint = oracle::simpson2d(
                [&](double x, double y) { return bivariate_density(x, y, r); }, xc, 8.0, yc,
                8.0, 700, 700);
            const double expected = joint / normal_sf(xc);
            CHECK(std::fabs(tail_exceedance(yc, TailCondition{r, xc}) - expected) < 1e-6);
        }
    }
}

TEST_CASE("exceedance agrees with Monte Carlo at fixed thresholds") {
    // 1e6 pairs at r = 0.63; empirical p(y > 2.38 | x > 2.38) vs quadrature
    SimConfig cfg;
    cfg.pool_size = 1000000;
    cfg.winner_count = 1;
    cfg.r = 0.63;
    cfg.replications = 1;
    cfg.seed = 20240501;
    const auto sample = sample_pairs(cfg);
    std::uint64_t above_x = 0, above_both = 0;
    for (std::size_t i = 0; i < sample.x.size(); ++i) {
        if (sample.x[i] > 2.38) {
            ++above_x;
            if (sample.y[i] > 2.38) ++above_both;
        }
    }
    const double p_hat = static_cast<double>(above_both) / static_cast<double>(above_x);
    const double p = tail_exceedance(2.38, TailCondition{0.63, 2.38});
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(above_x));
    CHECK(std::fabs(p_hat - p) < 3.0 * se);
}

TEST_CASE("inversion recovers the two reported correlations") {
    CHECK(std::fabs(invert_exceedance_for_r(2.38, 2.38, 0.2) - 0.63) < 0.01);
    CHECK(std::fabs(invert_exceedance_for_r(2.38, 2.38, 0.2) - 0.62921288930388) < 1e-4);
    CHECK(std::fabs(invert_exceedance_for_r(2.35, 3.51, 6.0 / 22.0) - 0.48) < 0.01);
    CHECK(std::fabs(invert_exceedance_for_r(2.35, 3.51, 6.0 / 22.0) - 0.48300267008570632) <
          1e-4);
}

TEST_CASE("inversion of the r = 0 exceedance returns r = 0") {
    for (auto [yc, xc] : std::vector<std::pair<double, double>>{{2.38, 2.38}, {2.35, 3.51}}) {
        const double r = invert_exceedance_for_r(yc, xc, normal_sf(yc));
        CHECK(std::fabs(r) < 1e-4);
    }
}

TEST_CASE("inversion residual meets the stated tolerance") {
    const double r = invert_exceedance_for_r(2.38, 2.38, 0.2);
    CHECK(std::fabs(tail_exceedance(2.38, TailCondition{r, 2.38}) - 0.2) < 1e-6);
}

TEST_CASE("inversion rejects unattainable targets with the admissible range") {
    try {
        invert_exceedance_for_r(2.38, 2.38, 0.001);  // below S(y_c) ~ 0.0087
        FAIL("expected no_solution_error");
    } catch (const no_solution_error& e) {
        CHECK(std::fabs(e.attainable_lo - normal_sf(2.38)) < 1e-6);
        CHECK(e.attainable_hi <= 1.0);
        CHECK(e.attainable_hi > 0.9);
    }
    CHECK_THROWS_AS(invert_exceedance_for_r(2.38, 2.38, 1.0), no_solution_error);
    CHECK_THROWS_AS(invert_exceedance_for_r(2.38, 2.38, -0.1), domain_error);
    CHECK_THROWS_AS(invert_exceedance_for_r(2.38, 2.38, 1.7), domain_error);
}

TEST_CASE("tpr-fpr gap: independence, the reported case, and the perfect limit") {
    // at r = 0 with f = S(x_c) the metric has no predictive power
    const double f0 = normal_sf(2.38);
    CHECK(std::fabs(expected_tpr_fpr_gap(TailCondition{0.0, 2.38}, f0)) < 1e-8);

    // the reported case: the gap is far below r itself
    const double gap = expected_tpr_fpr_gap(TailCondition{0.65, 2.38}, 25.0 / 2887.0);
    CHECK(gap < 0.5);
    CHECK(gap > 0.0);
    CHECK(std::fabs(gap - 0.20886154331798020) < 1e-6);

    // near-perfect coupling drives the gap toward 1
    CHECK(expected_tpr_fpr_gap(TailCondition{0.999, 2.38}, 25.0 / 2887.0) > 0.9);

    CHECK_THROWS_AS(expected_tpr_fpr_gap(TailCondition{0.5, 2.38}, 0.0), domain_error);
    CHECK_THROWS_AS(expected_tpr_fpr_gap(TailCondition{0.5, 2.38}, 1.0), domain_error);
}

TEST_CASE("deceedance complements exceedance") {
    for (double r : {0.0, 0.4, 0.8}) {
        for (double yc : {-1.0, 1.0, 2.38}) {
            const TailCondition cond{r, 2.38};
            CHECK(std::fabs(tail_exceedance(yc, cond) + tail_deceedance(yc, cond) - 1.0) <
                  1e-8);
        }
    }
}

}  // TEST_SUITE
