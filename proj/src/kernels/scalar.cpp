#include <cmath>
#include <cstddef>

#include "prizecorr/normal.hpp"
#include "kernel_table.hpp"

namespace prizecorr::kernels::detail {

namespace {

void pdf_scalar(const double* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = prizecorr::normal_pdf(z[i]);
}

void cdf_scalar(const double* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = prizecorr::normal_cdf(z[i]);
}

void sf_scalar(const double* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = prizecorr::normal_sf(z[i]);
}

void quantile_scalar(const double* p, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = prizecorr::normal_quantile(p[i]);
}

void couple_scalar(const double* x, const double* s, double r, double* y, std::size_t n) {
    const double w = std::sqrt(1.0 - r * r);
    for (std::size_t i = 0; i < n; ++i) y[i] = r * x[i] + w * s[i];
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{pdf_scalar, cdf_scalar, sf_scalar, quantile_scalar,
                               couple_scalar};
    return t;
}

}  // namespace prizecorr::kernels::detail
