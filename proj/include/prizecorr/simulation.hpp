#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prizecorr/errors.hpp"

namespace prizecorr {

enum class Coupling {
    gaussian,  // y = r*x + sqrt(1-r^2)*s
    mixture,   // y = x with probability r, else independent s
};

struct SimConfig {
    std::uint64_t pool_size = 0;
    std::uint64_t winner_count = 0;
    double r = 0.0;
    Coupling coupling = Coupling::gaussian;
    std::uint64_t replications = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One pool of correlated (x, y) pairs, stored column-wise. Normal variates
/// come from the inverse-CDF transform of xoshiro256++ uniforms; the draw
/// order is all x-uniforms, then all s-uniforms, then (mixture only) the
/// branch uniforms, so a (seed, stream) pair pins the sample bit-for-bit.
struct PairSample {
    std::vector<double> x;
    std::vector<double> y;
};

/// Samples cfg.pool_size pairs on stream 0 of cfg.seed.
PairSample sample_pairs(const SimConfig& cfg);

/// Marks the indices of the m largest values (ties broken by lower index).
void top_m_mask(std::span<const double> values, std::uint64_t m, std::vector<char>& mask);

/// |top-m by a  intersect  top-m by b|.
std::uint64_t overlap_count(std::span<const double> a, std::span<const double> b,
                            std::uint64_t m);

struct OverlapResult {
    std::vector<std::uint64_t> overlap_histogram;  // index k = overlap count, size M+1
    std::uint64_t replications = 0;
    double mean_overlap = 0.0;
};

/// The top-M overlap experiment: per replication (stream = replication
/// index), count how many of the top M by x are also in the top M by y,
/// with M = winner_count. Replications run in parallel; the histogram merge
/// is order-independent, so results do not depend on the thread count.
OverlapResult overlap_experiment(const SimConfig& cfg, int threads = 0);

struct ScanPoint {
    double r;
    double fraction_matching;
};

/// Fraction of replications whose overlap equals observed_overlap, for each
/// r on the grid [r_lo, r_hi] in steps of `step` (gaussian coupling).
/// Replications reuse one set of (x, s) streams across the whole grid
/// (common random numbers), which leaves each grid point binomially
/// distributed but smooths the profile so the argmax is stable.
std::vector<ScanPoint> profile_likelihood_scan(std::uint64_t pool, std::uint64_t m,
                                               std::uint64_t observed_overlap, double r_lo,
                                               double r_hi, double step,
                                               std::uint64_t reps_per_point,
                                               std::uint64_t seed, int threads = 0);

struct RocPoint {
    std::uint64_t m = 0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    double tpr = 0.0;
    double fpr = 0.0;
    std::optional<double> phi;  // absent when an indicator vector is constant
    double tpr_minus_fpr = 0.0;
};

/// Confusion statistics for winners = top winner_count by x against the
/// sieve = top m by y. phi is the Pearson correlation of the two binary
/// indicator vectors; at m == winner_count it coincides with tpr_minus_fpr
/// exactly (both reduce to (N*tp - m^2) / (m*(N-m))).
RocPoint roc_and_phi(std::span<const double> x, std::span<const double> y,
                     std::uint64_t winner_count, std::uint64_t m);

struct RocCurve {
    std::vector<RocPoint> points;  // one point per sieve size m = 0..N
};

/// Full ROC sweep over all sieve sizes for one realized sample.
RocCurve roc_curve(std::span<const double> x, std::span<const double> y,
                   std::uint64_t winner_count);

/// Citation-metric ranks (1-based, rank 1 = largest y) of the winners,
/// where winners are the top winner_count by x. The bridge from simulated
/// pools to PrizeDataset-shaped rank data.
std::vector<std::uint64_t> winner_metric_ranks(const PairSample& sample,
                                               std::uint64_t winner_count);

}  // namespace prizecorr
