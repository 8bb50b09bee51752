#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "prizecorr/kernels.hpp"
#include "prizecorr/normal.hpp"

using namespace prizecorr;

namespace {

// restores whatever ISA was active before the test
struct IsaGuard {
    kernels::Isa saved = kernels::active_isa();
    ~IsaGuard() { kernels::force_isa(saved); }
};

bool have_avx2() { return kernels::isa_available(kernels::Isa::avx2); }

std::vector<double> quantile_inputs() {
    std::vector<double> p;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> mid(0.001, 0.999);
    for (int i = 0; i < 20000; ++i) p.push_back(mid(gen));
    // tail bands on both sides
    for (int e = 3; e <= 14; ++e) {
        p.push_back(std::pow(10.0, -e));
        p.push_back(1.0 - std::pow(10.0, -e));
        for (int j = 0; j < 50; ++j) {
            const double u = std::pow(10.0, -e) * mid(gen);
            p.push_back(u);
            p.push_back(1.0 - u);
        }
    }
    p.push_back(0x1.0p-53);
    p.push_back(1.0 - 0x1.0p-53);
    return p;
}

template <class Fn>
void run_both(const Fn& kernel_call, const std::vector<double>& in,
              std::vector<double>& scalar_out, std::vector<double>& simd_out) {
    scalar_out.assign(in.size(), 0.0);
    simd_out.assign(in.size(), 0.0);
    kernels::force_isa(kernels::Isa::scalar);
    kernel_call(in, scalar_out);
    kernels::force_isa(kernels::Isa::avx2);
    kernel_call(in, simd_out);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dispatch reports and forces lanes") {
    IsaGuard guard;
    CHECK(kernels::isa_available(kernels::Isa::scalar));
    kernels::force_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    if (have_avx2()) {
        kernels::force_isa(kernels::Isa::avx2);
        CHECK(kernels::active_isa() == kernels::Isa::avx2);
    }
    CHECK(std::string(kernels::isa_name(kernels::Isa::scalar)) == "scalar");
    CHECK(std::string(kernels::isa_name(kernels::Isa::avx2)) == "avx2");
}

TEST_CASE("scalar lane is the reference loop") {
    IsaGuard guard;
    kernels::force_isa(kernels::Isa::scalar);
    std::vector<double> z{-3.7, -0.2, 0.0, 1.1, 4.4};
    std::vector<double> out(z.size());
    kernels::normal_cdf(z, out);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(out[i] == normal_cdf(z[i]));
    kernels::normal_pdf(z, out);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(out[i] == normal_pdf(z[i]));
    std::vector<double> p{0.01, 0.3, 0.5, 0.77, 0.9999};
    kernels::normal_quantile(p, out);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(out[i] == normal_quantile(p[i]));
}

TEST_CASE("span size mismatch is rejected") {
    std::vector<double> in(8), out(7);
    CHECK_THROWS_AS(kernels::normal_pdf(in, out), domain_error);
    std::vector<double> s(8), y(5);
    CHECK_THROWS_AS(kernels::gaussian_couple(in, s, 0.5, y), domain_error);
}

TEST_CASE("avx2 quantile matches scalar within 1e-14") {
    if (!have_avx2()) return;
    IsaGuard guard;
    const auto p = quantile_inputs();
    std::vector<double> zs, zv;
    run_both([](auto in, auto& out) { kernels::normal_quantile(in, out); }, p, zs, zv);
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(std::fabs(zs[i] - zv[i]) <= 1e-14 * std::max(1.0, std::fabs(zs[i])));
    }
}

TEST_CASE("avx2 cdf/sf/pdf match scalar within 1e-14 relative") {
    if (!have_avx2()) return;
    IsaGuard guard;
    std::vector<double> z;
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> wide(-37.0, 37.0);
    for (int i = 0; i < 20000; ++i) z.push_back(wide(gen));
    for (double v = -36.0; v <= 36.0; v += 0.125) z.push_back(v);

    std::vector<double> a, b;
    run_both([](auto in, auto& out) { kernels::normal_sf(in, out); }, z, a, b);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (a[i] == 0.0) {
            CHECK(b[i] == 0.0);
            continue;
        }
        CHECK(std::fabs(a[i] - b[i]) / a[i] <= 1e-14);
    }
    run_both([](auto in, auto& out) { kernels::normal_cdf(in, out); }, z, a, b);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (a[i] == 0.0) {
            CHECK(b[i] == 0.0);
            continue;
        }
        CHECK(std::fabs(a[i] - b[i]) / a[i] <= 1e-14);
    }
    run_both([](auto in, auto& out) { kernels::normal_pdf(in, out); }, z, a, b);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (a[i] == 0.0) continue;
        CHECK(std::fabs(a[i] - b[i]) / a[i] <= 1e-14);
    }
}

TEST_CASE("avx2 couple matches scalar") {
    if (!have_avx2()) return;
    IsaGuard guard;
    std::mt19937_64 gen(13);
    std::normal_distribution<double> nd;
    std::vector<double> x, s;
    for (int i = 0; i < 4097; ++i) {
        x.push_back(nd(gen));
        s.push_back(nd(gen));
    }
    std::vector<double> ya(x.size()), yb(x.size());
    kernels::force_isa(kernels::Isa::scalar);
    kernels::gaussian_couple(x, s, 0.63, ya);
    kernels::force_isa(kernels::Isa::avx2);
    kernels::gaussian_couple(x, s, 0.63, yb);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::fabs(ya[i] - yb[i]) <= 1e-14 * (1.0 + std::fabs(ya[i])));
}

TEST_CASE("remainder lanes agree for every length mod 4") {
    if (!have_avx2()) return;
    IsaGuard guard;
    for (std::size_t n = 1; n <= 9; ++n) {
        std::vector<double> p;
        for (std::size_t i = 0; i < n; ++i)
            p.push_back((static_cast<double>(i) + 0.7) / (static_cast<double>(n) + 1.0));
        std::vector<double> a, b;
        run_both([](auto in, auto& out) { kernels::normal_quantile(in, out); }, p, a, b);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::fabs(a[i] - b[i]) <= 1e-14 * std::max(1.0, std::fabs(a[i])));
    }
}

}  // TEST_SUITE
