#pragma once

// Portable, reproducible randomness. The standard <random> distributions are
// implementation-defined, so every draw used by the engines goes through the
// helpers below, which are defined bit-exactly on top of std::mt19937_64.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace contagion {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives the seed of stream `index` from `master`. Streams are a pure
/// function of (master, index), so per-trial results do not depend on the
/// order in which trials are executed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

template <class... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Rest... rest) noexcept {
    return derive_seed(derive_seed(master, index), static_cast<std::uint64_t>(rest)...);
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Uniform on [0, 1) with 53 bits of resolution.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
inline double uniform01_open_left(Engine& eng) { return 1.0 - uniform01(eng); }

/// Unbiased uniform integer on [0, n). n must be positive.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % n;
}

inline bool bernoulli(Engine& eng, double p) { return uniform01(eng) < p; }

/// Number of failures before the first success, P(success) = p in (0, 1].
inline std::uint64_t geometric(Engine& eng, double p) {
    if (p >= 1.0) return 0;
    const double u = uniform01_open_left(eng);
    const double k = std::floor(std::log(u) / std::log1p(-p));
    return k >= 1.8e19 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(k);
}

/// Continuous Pareto with density proportional to x^-exponent on
/// [x_min, x_max], sampled by CDF inversion. exponent > 1.
inline double bounded_pareto(Engine& eng, double exponent, double x_min, double x_max) {
    const double a = exponent - 1.0;
    const double u = uniform01(eng);
    const double ratio = std::pow(x_min / x_max, a);
    return x_min * std::pow(1.0 - u * (1.0 - ratio), -1.0 / a);
}

/// Fisher-Yates shuffle with a fixed draw order.
template <class T>
void shuffle(std::span<T> items, Engine& eng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(eng, i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

} // namespace contagion
