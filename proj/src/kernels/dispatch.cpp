#include "prizecorr/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "prizecorr/errors.hpp"
#include "kernel_table.hpp"

namespace prizecorr::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(PRIZECORR_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const detail::KernelTable* table_for(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return &detail::scalar_table();
        case Isa::avx2:
#if defined(PRIZECORR_HAVE_AVX2)
            return &detail::avx2_table();
#else
            return nullptr;
#endif
    }
    return nullptr;
}

struct Dispatch {
    std::atomic<const detail::KernelTable*> table;
    std::atomic<Isa> isa;

    Dispatch() {
        Isa pick = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
        if (const char* env = std::getenv("PRIZECORR_ISA")) {
            if (std::strcmp(env, "scalar") == 0) pick = Isa::scalar;
            if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) pick = Isa::avx2;
        }
        isa = pick;
        table = table_for(pick);
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "?";
}

Isa active_isa() { return dispatch().isa.load(); }

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
    return cpu_has_avx2();
}

void force_isa(Isa isa) {
    if (!isa_available(isa))
        throw domain_error(std::string("kernels: ISA not available: ") + isa_name(isa));
    dispatch().isa.store(isa);
    dispatch().table.store(table_for(isa));
}

namespace {

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) throw domain_error("kernels: input/output span sizes differ");
}

}  // namespace

void normal_pdf(std::span<const double> z, std::span<double> out) {
    check_sizes(z.size(), out.size());
    dispatch().table.load()->pdf(z.data(), out.data(), z.size());
}

void normal_cdf(std::span<const double> z, std::span<double> out) {
    check_sizes(z.size(), out.size());
    dispatch().table.load()->cdf(z.data(), out.data(), z.size());
}

void normal_sf(std::span<const double> z, std::span<double> out) {
    check_sizes(z.size(), out.size());
    dispatch().table.load()->sf(z.data(), out.data(), z.size());
}

void normal_quantile(std::span<const double> p, std::span<double> out) {
    check_sizes(p.size(), out.size());
    dispatch().table.load()->quantile(p.data(), out.data(), p.size());
}

void gaussian_couple(std::span<const double> x, std::span<const double> s, double r,
                     std::span<double> y) {
    check_sizes(x.size(), s.size());
    check_sizes(x.size(), y.size());
    dispatch().table.load()->couple(x.data(), s.data(), r, y.data(), x.size());
}

}  // namespace prizecorr::kernels
