#pragma once

#include <cstdint>

namespace steinlab {

/// Counter-based random stream keyed by (seed, salt, sample index).
///
/// Each sample of an ensemble owns its own stream, so serial and parallel
/// runs consume exactly the same variates per sample and produce bitwise
/// identical results for any worker count. The generator is a splitmix64
/// walk from a mixed initial state; Gaussians come from a Box-Muller
/// transform with the usual cached partner.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t salt, std::uint64_t index)
        : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(salt + 0x6A09E667F3BCC909ULL)) ^
                 mix(index + 0xBB67AE8584CAA73BULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform on (0, 1]: never returns 0, so log() below is safe.
    double next_uniform() {
        const std::uint64_t bits = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    double next_gaussian();

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace steinlab
