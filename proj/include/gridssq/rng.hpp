#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace gridssq {

// Reproducibility contract: every stochastic result in this library is a pure
// function of a 64-bit seed. std::mt19937_64 output is fixed by the standard,
// and all distributions below are hand-rolled so that no libstdc++/libc++
// implementation detail can leak into results.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent substream seed from a master seed and up to three
// stream tags. Substreams for different tag paths are statistically
// uncorrelated, so modules can draw from private streams without coupling
// their consumption order to one another.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ mix64(a));
    s = mix64(s ^ mix64(b));
    s = mix64(s ^ mix64(c));
    return s;
}

// Stream tags used across the library. Fixed values; changing one changes
// every artifact generated from a given seed.
namespace stream {
inline constexpr std::uint64_t inventory = 1;
inline constexpr std::uint64_t events = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t split = 4;
inline constexpr std::uint64_t ga_init = 5;
inline constexpr std::uint64_t ga_breed = 6;
inline constexpr std::uint64_t bp_shuffle = 7;
inline constexpr std::uint64_t ga_seed = 8;
inline constexpr std::uint64_t bp_seed = 9;
}  // namespace stream

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform on {0, ..., n-1}, bias-free via rejection.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % range);
    }

    // Box-Muller without caching: two uniforms per draw, always.
    double normal(double mean, double stddev) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        return mean + stddev * r * std::cos(two_pi * u2);
    }

    // Inverse-transform Poisson. Fine for the event rates used here; do not
    // feed means past a few hundred.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        double p = std::exp(-mean);
        double cdf = p;
        const double u = uniform01();
        std::uint64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (k > 100000) break;
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates, descending index, swap target drawn via uniform_index.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = rng.uniform_index(i);
        if (j != i - 1) std::swap(items[i - 1], items[j]);
    }
}

}  // namespace gridssq
