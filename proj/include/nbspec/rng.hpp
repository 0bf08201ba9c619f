#pragma once

#include <cmath>
#include <cstdint>

namespace nbspec {

// SplitMix64. Used instead of <random> distributions, whose output is
// implementation-defined, so generated graphs are identical across toolchains.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % bound;
    }

    /// Standard normal via Box-Muller.
    double normal() noexcept;

  private:
    std::uint64_t state_;
};

inline double SplitMix64::normal() noexcept {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

/// Derives an independent stream seed, e.g. one per sweep trial.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    SplitMix64 mix(base ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    return mix.next();
}

}  // namespace nbspec
