#include "prizecorr/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prizecorr {

namespace {

constexpr double kGridTop = 0.999;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct LikelihoodContext {
    std::vector<double> zs;      // z-scores of observed ranks
    double x_c = 0.0;
    std::optional<double> y_c;
    std::uint64_t censored = 0;
    double sum_log_pdf = 0.0;    // r-independent part of the observed terms
    double log_sf_xc = 0.0;

    explicit LikelihoodContext(const PrizeDataset& ds) {
        const Thresholds thr = derive_thresholds(ds);
        x_c = thr.x_c;
        y_c = thr.y_c;
        censored = ds.censored_count;
        zs.reserve(ds.observed_ranks.size());
        for (std::uint64_t rank : ds.observed_ranks) {
            const double z = rank_to_z(rank, ds.pool_size);
            zs.push_back(z);
            sum_log_pdf += std::log(normal_pdf(z));
        }
        log_sf_xc = log_normal_sf(x_c);
        if (censored > 0 && !y_c)
            throw data_error("log_likelihood: censored winners present but no list cutoff");
    }

    double operator()(double r) const {
        if (!(r > -1.0 && r < 1.0))
            throw domain_error("log_likelihood: |r| must be < 1");
        const double w = std::sqrt(1.0 - r * r);
        double acc = sum_log_pdf - static_cast<double>(zs.size()) * log_sf_xc;
        for (double z : zs) acc += log_normal_sf((x_c - r * z) / w);
        if (censored > 0) {
            const double below = tail_deceedance(*y_c, TailCondition{r, x_c});
            if (!(below > 0.0)) return -kInf;
            acc += static_cast<double>(censored) * std::log(below);
        }
        return acc;
    }
};

std::vector<double> make_grid(double step) {
    if (!(step > 0.0 && step <= 0.01))
        throw domain_error("r grid step must lie in (0, 0.01]");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(kGridTop / step) + 2);
    for (double r = 0.0; r < kGridTop - 1e-12; r += step) grid.push_back(r);
    grid.push_back(kGridTop);
    return grid;
}

// Golden-section maximization on [lo, hi] to absolute tolerance xtol.
template <class F>
double golden_max(const F& f, double lo, double hi, double xtol) {
    constexpr double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

Method likelihood_method(const PrizeDataset& ds) {
    return ds.censored_count > 0 ? Method::censored_mle : Method::full_mle;
}

EstimateReport make_report(double r_hat, Method method, const Thresholds& thr) {
    EstimateReport rep;
    rep.r_hat = r_hat;
    rep.method = method;
    rep.noise_prefactor = std::sqrt(1.0 - r_hat * r_hat);
    rep.thresholds = thr;
    return rep;
}

}  // namespace

void validate(PrizeDataset& ds) {
    if (ds.pool_size == 0) throw data_error("dataset: pool_size must be positive");
    if (ds.observed_ranks.empty() && ds.censored_count == 0)
        throw data_error("dataset: empty dataset (no observed ranks and no censored winners)");
    if (ds.winner_count == 0) throw data_error("dataset: winner_count must be positive");
    if (ds.winner_count != ds.observed_ranks.size() + ds.censored_count) {
        std::ostringstream msg;
        msg << "dataset: winner_count (" << ds.winner_count
            << ") must equal observed ranks (" << ds.observed_ranks.size()
            << ") plus censored_count (" << ds.censored_count << ")";
        throw data_error(msg.str());
    }
    if (ds.winner_count > ds.pool_size)
        throw data_error("dataset: winner_count exceeds pool_size");
    if (ds.censored_count > 0 && !ds.list_cutoff_rank)
        throw data_error("dataset: censored_count > 0 requires list_cutoff_rank");
    if (ds.list_cutoff_rank) {
        if (*ds.list_cutoff_rank == 0 || *ds.list_cutoff_rank >= ds.pool_size)
            throw data_error("dataset: list_cutoff_rank must lie in [1, pool_size)");
    }
    std::sort(ds.observed_ranks.begin(), ds.observed_ranks.end());
    for (std::size_t i = 0; i < ds.observed_ranks.size(); ++i) {
        const std::uint64_t rank = ds.observed_ranks[i];
        if (rank == 0) throw data_error("dataset: observed ranks must be positive");
        if (rank >= ds.pool_size)
            throw data_error("dataset: observed rank " + std::to_string(rank) +
                             " must be < pool_size");
        if (i > 0 && rank == ds.observed_ranks[i - 1])
            throw data_error("dataset: duplicate observed rank " + std::to_string(rank));
        if (ds.list_cutoff_rank && rank > *ds.list_cutoff_rank)
            throw data_error("dataset: observed rank " + std::to_string(rank) +
                             " lies beyond the list cutoff " +
                             std::to_string(*ds.list_cutoff_rank));
    }
}

Thresholds derive_thresholds(const PrizeDataset& ds) {
    Thresholds thr;
    thr.x_c = normal_quantile(
        1.0 - static_cast<double>(ds.winner_count) / static_cast<double>(ds.pool_size));
    if (ds.list_cutoff_rank)
        thr.y_c = normal_quantile(1.0 - static_cast<double>(*ds.list_cutoff_rank) /
                                            static_cast<double>(ds.pool_size));
    return thr;
}

double log_likelihood(const PrizeDataset& ds, double r) {
    PrizeDataset copy = ds;
    validate(copy);
    return LikelihoodContext(copy)(r);
}

const char* method_name(Method m) {
    switch (m) {
        case Method::full_mle: return "full-mle";
        case Method::censored_mle: return "censored-mle";
        case Method::exceedance_inversion: return "exceedance-inversion";
    }
    return "?";
}

EstimateReport mle(const PrizeDataset& ds, double r_grid_step) {
    PrizeDataset copy = ds;
    validate(copy);
    const LikelihoodContext ll(copy);
    const std::vector<double> grid = make_grid(r_grid_step);

    std::size_t best = 0;
    double best_ll = -kInf;
    bool any_finite = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = ll(grid[i]);
        if (std::isfinite(v)) any_finite = true;
        if (v > best_ll) {
            best_ll = v;
            best = i;
        }
    }
    if (!any_finite)
        throw estimation_error("mle: likelihood is -inf across the whole r grid");

    const double lo = best > 0 ? grid[best - 1] : grid.front();
    const double hi = best + 1 < grid.size() ? grid[best + 1] : grid.back();
    double r_hat = golden_max(ll, lo, hi, 1e-5);
    if (ll(grid[best]) > ll(r_hat)) r_hat = grid[best];

    EstimateReport rep = make_report(r_hat, likelihood_method(copy), derive_thresholds(copy));
    rep.at_boundary = best + 1 == grid.size() || r_hat >= kGridTop - r_grid_step;
    return rep;
}

std::pair<PosteriorGrid, EstimateReport> posterior(const PrizeDataset& ds, double grid_step,
                                                   double credible_level) {
    if (!(credible_level > 0.0 && credible_level < 1.0))
        throw domain_error("posterior: credible_level must lie in (0, 1)");
    PrizeDataset copy = ds;
    validate(copy);
    const LikelihoodContext ll(copy);

    PosteriorGrid grid;
    grid.prior_tag = "uniform[0,0.999]";
    grid.r_values = make_grid(grid_step);
    grid.log_likelihoods.reserve(grid.r_values.size());
    for (double r : grid.r_values) grid.log_likelihoods.push_back(ll(r));

    const double max_ll =
        *std::max_element(grid.log_likelihoods.begin(), grid.log_likelihoods.end());
    if (!std::isfinite(max_ll))
        throw estimation_error("posterior: likelihood is -inf across the whole r grid");

    grid.posterior_masses.reserve(grid.r_values.size());
    double total = 0.0;
    for (double v : grid.log_likelihoods) {
        const double m = std::isfinite(v) ? std::exp(v - max_ll) : 0.0;
        grid.posterior_masses.push_back(m);
        total += m;
    }
    for (double& m : grid.posterior_masses) m /= total;

    // equal-tailed interval from the discrete cumulative mass
    const auto quantile_of = [&](double q) {
        double cum = 0.0;
        for (std::size_t i = 0; i < grid.posterior_masses.size(); ++i) {
            const double next = cum + grid.posterior_masses[i];
            if (next >= q) {
                const double prev_r = i > 0 ? grid.r_values[i - 1] : grid.r_values[0];
                const double span = grid.r_values[i] - prev_r;
                const double m = grid.posterior_masses[i];
                return m > 0.0 ? prev_r + span * (q - cum) / m : grid.r_values[i];
            }
            cum = next;
        }
        return grid.r_values.back();
    };

    const std::size_t mode = static_cast<std::size_t>(
        std::max_element(grid.posterior_masses.begin(), grid.posterior_masses.end()) -
        grid.posterior_masses.begin());

    EstimateReport rep =
        make_report(grid.r_values[mode], likelihood_method(copy), derive_thresholds(copy));
    const double alpha = 1.0 - credible_level;
    rep.ci_low = quantile_of(alpha / 2.0);
    rep.ci_high = quantile_of(1.0 - alpha / 2.0);
    rep.credible_level = credible_level;
    rep.at_boundary = mode + 1 == grid.r_values.size();
    return {std::move(grid), rep};
}

EstimateReport infer_by_exceedance(const PrizeDataset& ds) {
    PrizeDataset copy = ds;
    validate(copy);
    const Thresholds thr = derive_thresholds(copy);

    double y_c = 0.0;
    double target = 0.0;
    if (copy.censored_count > 0) {
        y_c = *thr.y_c;
        target = static_cast<double>(copy.observed_ranks.size()) /
                 static_cast<double>(copy.winner_count);
    } else {
        y_c = thr.x_c;
        const std::uint64_t m = copy.winner_count;
        const auto inside = std::count_if(copy.observed_ranks.begin(),
                                          copy.observed_ranks.end(),
                                          [m](std::uint64_t rank) { return rank <= m; });
        target = static_cast<double>(inside) / static_cast<double>(m);
    }

    const double r_hat = invert_exceedance_for_r(y_c, thr.x_c, target);
    EstimateReport rep = make_report(r_hat, Method::exceedance_inversion, thr);
    rep.thresholds.y_c = y_c;
    rep.at_boundary = r_hat >= 0.999;
    return rep;
}

}  // namespace prizecorr
