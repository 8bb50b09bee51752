#pragma once

#include <cstdint>

namespace prizecorr {

// xoshiro256++ (Blackman & Vigna), seeded through SplitMix64. Replication
// streams are derived as
//     state = 4 outputs of SplitMix64(mix64(mix64(seed) ^ (stream*K1 + K2)))
// so any (seed, stream) pair yields an independent, reproducible generator
// regardless of how replications are scheduled across threads.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm =
            mix64(mix64(seed) ^ (stream * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL));
        for (auto& w : s_) {
            sm += 0x9e3779b97f4a7c15ULL;
            w = mix64(sm);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double strictly inside (0, 1): (k + 1/2) * 2^-53 on the top
    /// 53 bits, so it can feed the normal quantile without hitting 0 or 1.
    double next_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
};

}  // namespace prizecorr
