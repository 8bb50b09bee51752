#pragma once

#include <cstddef>

namespace prizecorr::kernels::detail {

using MapFn = void (*)(const double*, double*, std::size_t);
using CoupleFn = void (*)(const double*, const double*, double, double*, std::size_t);

struct KernelTable {
    MapFn pdf;
    MapFn cdf;
    MapFn sf;
    MapFn quantile;
    CoupleFn couple;
};

const KernelTable& scalar_table();

#if defined(PRIZECORR_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace prizecorr::kernels::detail
