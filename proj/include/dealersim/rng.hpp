#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dealersim {

/// SplitMix64 finalizer. Used both to expand seeds and as the fixed 64-bit
/// hash behind per-run seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// hash64(a, b) = splitmix64(a ^ splitmix64(b)); chains left to right.
constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a ^ splitmix64(b));
}

/// Portable random source: std::mt19937_64 (output sequence fixed by the
/// standard) with explicit integer-to-float mappings. The std::*_distribution
/// classes are implementation defined, so none of them are used.
///
///  - uniform01:  (x >> 11) * 2^-53, in [0, 1)
///  - uniform_index(n): rejection sampling on the top of the 64-bit range
///  - gaussian:   Marsaglia polar method on uniform01 pairs, spare cached
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool coin() { return (engine_() >> 63) != 0; }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Bit pattern of a double with -0.0 folded onto +0.0.
inline std::uint64_t double_bits(double v) noexcept {
    return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
}

}  // namespace dealersim
