#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prizecorr/normal.hpp"
#include "prizecorr/tail_model.hpp"

namespace prizecorr {

/// The sole input to inference: pool size, the ordinal citation ranks of the
/// winners that appear in the data, and the count of winners known only to
/// lie below the top-cited list (the censored ones).
struct PrizeDataset {
    std::uint64_t pool_size = 0;
    std::vector<std::uint64_t> observed_ranks;  // ascending after validation
    std::uint64_t censored_count = 0;
    std::optional<std::uint64_t> list_cutoff_rank;
    std::uint64_t winner_count = 0;
    std::string label;

    bool operator==(const PrizeDataset&) const = default;
};

/// Sorts observed_ranks and enforces every dataset invariant; throws
/// data_error with a specific message on the first violation.
void validate(PrizeDataset& ds);

struct Thresholds {
    double x_c = 0.0;
    std::optional<double> y_c;
};

/// x_c from the winner fraction, y_c from the top-list cutoff when present.
Thresholds derive_thresholds(const PrizeDataset& ds);

/// Log likelihood of the dataset at correlation r: observed ranks enter
/// through the conditional tail density, censored winners through the mass
/// below y_c. Returns -inf when the censored mass vanishes numerically.
double log_likelihood(const PrizeDataset& ds, double r);

enum class Method { full_mle, censored_mle, exceedance_inversion };

const char* method_name(Method m);

struct EstimateReport {
    double r_hat = 0.0;
    Method method = Method::full_mle;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<double> credible_level;
    bool at_boundary = false;
    double noise_prefactor = 1.0;  // sqrt(1 - r_hat^2)
    Thresholds thresholds;
};

/// Maximum likelihood over the grid {0, step, ..., 0.999}, refined by
/// golden-section search inside the winning cell to 1e-5.
EstimateReport mle(const PrizeDataset& ds, double r_grid_step = 0.002);

struct PosteriorGrid {
    std::vector<double> r_values;
    std::vector<double> log_likelihoods;
    std::vector<double> posterior_masses;  // normalized to sum 1
    std::string prior_tag;
};

/// Grid posterior under a uniform prior on [0, 0.999] with an equal-tailed
/// credible interval (linear interpolation on the discrete cumulative mass).
std::pair<PosteriorGrid, EstimateReport> posterior(const PrizeDataset& ds,
                                                   double grid_step = 0.002,
                                                   double credible_level = 0.95);

/// Point estimate by inverting the tail exceedance: censored datasets use
/// the top-list fraction (observed / winners) at y_c; fully ranked datasets
/// use the fraction of winners inside the top winner_count at y_c = x_c.
EstimateReport infer_by_exceedance(const PrizeDataset& ds);

}  // namespace prizecorr
