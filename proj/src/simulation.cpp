#include "prizecorr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "prizecorr/kernels.hpp"
#include "prizecorr/parallel.hpp"
#include "prizecorr/rng.hpp"

namespace prizecorr {

namespace {

struct Workspace {
    std::vector<double> x, s, y, u, scratch;
    std::vector<char> mask;

    void resize(std::size_t n) {
        x.resize(n);
        s.resize(n);
        y.resize(n);
        u.resize(n);
        scratch.resize(n);
        mask.resize(n);
    }
};

void fill_pairs(Rng& rng, std::uint64_t n, double r, Coupling coupling, Workspace& ws) {
    ws.resize(n);
    for (auto& v : ws.u) v = rng.next_open01();
    kernels::normal_quantile(ws.u, ws.x);
    for (auto& v : ws.u) v = rng.next_open01();
    kernels::normal_quantile(ws.u, ws.s);
    if (coupling == Coupling::gaussian) {
        kernels::gaussian_couple(ws.x, ws.s, r, ws.y);
    } else {
        for (auto& v : ws.u) v = rng.next_open01();
        for (std::size_t i = 0; i < n; ++i) ws.y[i] = ws.u[i] < r ? ws.x[i] : ws.s[i];
    }
}

// Value of the m-th largest element; scratch is clobbered.
double top_m_threshold(std::span<const double> values, std::uint64_t m,
                       std::vector<double>& scratch) {
    scratch.assign(values.begin(), values.end());
    std::nth_element(scratch.begin(), scratch.begin() + (m - 1), scratch.end(),
                     std::greater<double>());
    return scratch[m - 1];
}

void top_m_mask_impl(std::span<const double> values, std::uint64_t m,
                     std::vector<char>& mask, std::vector<double>& scratch) {
    const std::size_t n = values.size();
    mask.assign(n, 0);
    if (m == 0) return;
    if (m >= n) {
        mask.assign(n, 1);
        return;
    }
    const double t = top_m_threshold(values, m, scratch);
    std::uint64_t taken = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] > t) {
            mask[i] = 1;
            ++taken;
        }
    }
    // fill the remaining slots among threshold ties in index order
    for (std::size_t i = 0; i < n && taken < m; ++i) {
        if (values[i] == t) {
            mask[i] = 1;
            ++taken;
        }
    }
}

std::uint64_t overlap_against_mask(std::span<const double> y, std::uint64_t m,
                                   const std::vector<char>& in_x,
                                   std::vector<double>& scratch) {
    const std::size_t n = y.size();
    if (m == 0) return 0;
    if (m >= n) {
        std::uint64_t k = 0;
        for (char c : in_x) k += static_cast<std::uint64_t>(c);
        return k;
    }
    const double t = top_m_threshold(y, m, scratch);
    std::uint64_t k = 0, taken = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] > t) {
            ++taken;
            k += static_cast<std::uint64_t>(in_x[i]);
        }
    }
    for (std::size_t i = 0; i < n && taken < m; ++i) {
        if (y[i] == t) {
            ++taken;
            k += static_cast<std::uint64_t>(in_x[i]);
        }
    }
    return k;
}

}  // namespace

void SimConfig::validate() const {
    if (pool_size == 0) throw domain_error("SimConfig: pool_size must be positive");
    if (winner_count == 0 || winner_count > pool_size)
        throw domain_error("SimConfig: winner_count must lie in [1, pool_size]");
    if (replications == 0) throw domain_error("SimConfig: replications must be positive");
    if (coupling == Coupling::gaussian) {
        if (!(std::fabs(r) < 1.0))
            throw domain_error("SimConfig: gaussian coupling requires |r| < 1");
    } else {
        if (!(r >= 0.0 && r <= 1.0))
            throw domain_error("SimConfig: mixture coupling requires r in [0, 1]");
    }
}

PairSample sample_pairs(const SimConfig& cfg) {
    cfg.validate();
    Workspace ws;
    Rng rng(cfg.seed, 0);
    fill_pairs(rng, cfg.pool_size, cfg.r, cfg.coupling, ws);
    return PairSample{std::move(ws.x), std::move(ws.y)};
}

void top_m_mask(std::span<const double> values, std::uint64_t m, std::vector<char>& mask) {
    std::vector<double> scratch;
    top_m_mask_impl(values, m, mask, scratch);
}

std::uint64_t overlap_count(std::span<const double> a, std::span<const double> b,
                            std::uint64_t m) {
    if (a.size() != b.size()) throw domain_error("overlap_count: size mismatch");
    if (m > a.size()) throw domain_error("overlap_count: m exceeds sample size");
    std::vector<char> mask;
    std::vector<double> scratch;
    top_m_mask_impl(a, m, mask, scratch);
    return overlap_against_mask(b, m, mask, scratch);
}

OverlapResult overlap_experiment(const SimConfig& cfg, int threads) {
    cfg.validate();
    const std::uint64_t m = cfg.winner_count;
    const std::uint64_t reps = cfg.replications;

    unsigned hw = std::thread::hardware_concurrency();
    const std::size_t nchunks =
        std::max<std::size_t>(1, threads > 0 ? static_cast<std::size_t>(threads)
                                             : (hw ? hw : 1));
    std::vector<std::vector<std::uint64_t>> hists(nchunks,
                                                  std::vector<std::uint64_t>(m + 1, 0));

    parallel_chunks(reps, static_cast<int>(nchunks),
                    [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                        Workspace ws;
                        auto& hist = hists[chunk];
                        for (std::size_t rep = begin; rep < end; ++rep) {
                            Rng rng(cfg.seed, rep);
                            fill_pairs(rng, cfg.pool_size, cfg.r, cfg.coupling, ws);
                            top_m_mask_impl(ws.x, m, ws.mask, ws.scratch);
                            const std::uint64_t k =
                                overlap_against_mask(ws.y, m, ws.mask, ws.scratch);
                            ++hist[k];
                        }
                    });

    OverlapResult out;
    out.overlap_histogram.assign(m + 1, 0);
    out.replications = reps;
    for (const auto& h : hists)
        for (std::size_t k = 0; k <= m; ++k) out.overlap_histogram[k] += h[k];
    double sum = 0.0;
    for (std::size_t k = 0; k <= m; ++k)
        sum += static_cast<double>(k) * static_cast<double>(out.overlap_histogram[k]);
    out.mean_overlap = sum / static_cast<double>(reps);
    return out;
}

std::vector<ScanPoint> profile_likelihood_scan(std::uint64_t pool, std::uint64_t m,
                                               std::uint64_t observed_overlap, double r_lo,
                                               double r_hi, double step,
                                               std::uint64_t reps_per_point,
                                               std::uint64_t seed, int threads) {
    if (!(step > 0.0)) throw domain_error("profile_likelihood_scan: step must be > 0");
    if (reps_per_point < 1000)
        throw domain_error("profile_likelihood_scan: needs at least 1000 replications");
    if (m == 0 || m > pool)
        throw domain_error("profile_likelihood_scan: m must lie in [1, pool]");
    if (observed_overlap > m)
        throw domain_error("profile_likelihood_scan: observed_overlap exceeds m");
    if (!(r_lo <= r_hi) || !(std::fabs(r_lo) < 1.0) || !(std::fabs(r_hi) < 1.0))
        throw domain_error("profile_likelihood_scan: grid must lie inside (-1, 1)");

    std::vector<double> grid;
    for (double r = r_lo; r <= r_hi + 1e-12; r += step) grid.push_back(r);

    unsigned hw = std::thread::hardware_concurrency();
    const std::size_t nchunks =
        std::max<std::size_t>(1, threads > 0 ? static_cast<std::size_t>(threads)
                                             : (hw ? hw : 1));
    std::vector<std::vector<std::uint64_t>> counts(nchunks,
                                                   std::vector<std::uint64_t>(grid.size(), 0));

    parallel_chunks(reps_per_point, static_cast<int>(nchunks),
                    [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                        Workspace ws;
                        auto& count = counts[chunk];
                        for (std::size_t rep = begin; rep < end; ++rep) {
                            Rng rng(seed, rep);
                            ws.resize(pool);
                            for (auto& v : ws.u) v = rng.next_open01();
                            kernels::normal_quantile(ws.u, ws.x);
                            for (auto& v : ws.u) v = rng.next_open01();
                            kernels::normal_quantile(ws.u, ws.s);
                            top_m_mask_impl(ws.x, m, ws.mask, ws.scratch);
                            for (std::size_t g = 0; g < grid.size(); ++g) {
                                kernels::gaussian_couple(ws.x, ws.s, grid[g], ws.y);
                                const std::uint64_t k =
                                    overlap_against_mask(ws.y, m, ws.mask, ws.scratch);
                                if (k == observed_overlap) ++count[g];
                            }
                        }
                    });

    std::vector<ScanPoint> out;
    out.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::uint64_t c = 0;
        for (const auto& chunk : counts) c += chunk[g];
        out.push_back({grid[g], static_cast<double>(c) / static_cast<double>(reps_per_point)});
    }
    return out;
}

namespace {

RocPoint make_roc_point(std::uint64_t n, std::uint64_t w, std::uint64_t m, std::uint64_t tp) {
    RocPoint pt;
    pt.m = m;
    pt.tp = tp;
    pt.fp = m - tp;
    pt.tpr = static_cast<double>(tp) / static_cast<double>(w);
    pt.fpr = static_cast<double>(pt.fp) / static_cast<double>(n - w);
    // exact integer numerator/denominator; coincides with phi when m == w
    const double num = static_cast<double>(tp * (n - w)) - static_cast<double>(pt.fp * w);
    const double den = static_cast<double>(w * (n - w));
    pt.tpr_minus_fpr = num / den;
    if (m > 0 && m < n) {
        const double phi_den =
            std::sqrt(den * static_cast<double>(m * (n - m)));
        pt.phi = (static_cast<double>(n * tp) - static_cast<double>(m * w)) / phi_den;
    }
    return pt;
}

}  // namespace

RocPoint roc_and_phi(std::span<const double> x, std::span<const double> y,
                     std::uint64_t winner_count, std::uint64_t m) {
    const std::size_t n = x.size();
    if (y.size() != n) throw domain_error("roc_and_phi: size mismatch");
    if (winner_count == 0 || winner_count >= n)
        throw domain_error("roc_and_phi: winner_count must lie in [1, size)");
    if (m > n) throw domain_error("roc_and_phi: m exceeds sample size");

    std::vector<char> winners;
    std::vector<double> scratch;
    top_m_mask_impl(x, winner_count, winners, scratch);
    const std::uint64_t tp = overlap_against_mask(y, m, winners, scratch);
    return make_roc_point(n, winner_count, m, tp);
}

RocCurve roc_curve(std::span<const double> x, std::span<const double> y,
                   std::uint64_t winner_count) {
    const std::size_t n = x.size();
    if (y.size() != n) throw domain_error("roc_curve: size mismatch");
    if (winner_count == 0 || winner_count >= n)
        throw domain_error("roc_curve: winner_count must lie in [1, size)");

    std::vector<char> winners;
    std::vector<double> scratch;
    top_m_mask_impl(x, winner_count, winners, scratch);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (y[a] != y[b]) return y[a] > y[b];
        return a < b;
    });

    RocCurve curve;
    curve.points.reserve(n + 1);
    std::uint64_t tp = 0;
    curve.points.push_back(make_roc_point(n, winner_count, 0, 0));
    for (std::size_t m = 1; m <= n; ++m) {
        tp += static_cast<std::uint64_t>(winners[order[m - 1]]);
        curve.points.push_back(make_roc_point(n, winner_count, m, tp));
    }
    return curve;
}

std::vector<std::uint64_t> winner_metric_ranks(const PairSample& sample,
                                               std::uint64_t winner_count) {
    const std::size_t n = sample.x.size();
    if (sample.y.size() != n) throw domain_error("winner_metric_ranks: size mismatch");
    if (winner_count == 0 || winner_count > n)
        throw domain_error("winner_metric_ranks: winner_count must lie in [1, size]");

    std::vector<char> winners;
    std::vector<double> scratch;
    top_m_mask_impl(sample.x, winner_count, winners, scratch);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (sample.y[a] != sample.y[b]) return sample.y[a] > sample.y[b];
        return a < b;
    });

    std::vector<std::uint64_t> ranks;
    ranks.reserve(winner_count);
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (winners[order[pos]]) ranks.push_back(pos + 1);
    }
    return ranks;
}

}  // namespace prizecorr
