#pragma once

#include <cstddef>
#include <span>

namespace prizecorr::kernels {

/// Instruction sets the batch kernels can run on. The scalar lane is the
/// reference implementation (it loops over the scalar functions in
/// normal.hpp); the AVX2 lane is equivalence-tested against it.
enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

/// ISA selected at startup: AVX2 when the CPU supports it (and the build
/// carries the AVX2 lane), scalar otherwise. The PRIZECORR_ISA environment
/// variable ("scalar" or "avx2") overrides the automatic pick.
Isa active_isa();

/// True when the given lane exists in this build and on this CPU.
bool isa_available(Isa isa);

/// Forces a lane, e.g. to compare outputs in tests. Throws domain_error if
/// the lane is unavailable.
void force_isa(Isa isa);

void normal_pdf(std::span<const double> z, std::span<double> out);
void normal_cdf(std::span<const double> z, std::span<double> out);
void normal_sf(std::span<const double> z, std::span<double> out);
void normal_quantile(std::span<const double> p, std::span<double> out);

/// y[i] = r*x[i] + sqrt(1-r^2)*s[i]
void gaussian_couple(std::span<const double> x, std::span<const double> s, double r,
                     std::span<double> y);

}  // namespace prizecorr::kernels
