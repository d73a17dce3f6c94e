#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace wireoff {

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a parent seed and a key path.
/// Used for counter-style streams, e.g. (replication, spawn minute, customer).
inline std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(parent ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x9e3779b97f4a7c15ULL));
    return h;
}

/// Named sub-stream of a master seed ("fit", "simulation", ...).
inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view name) noexcept {
    std::uint64_t fnv = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        fnv ^= c;
        fnv *= 0x100000001b3ULL;
    }
    return derive_seed(parent, {fnv});
}

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator so it plugs into
/// <random> distributions, and is cheap enough to instantiate per customer.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Log-uniform on [lo, hi].
    double log_uniform(double lo, double hi) noexcept {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    /// Uniform integer on [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(static_cast<double>(span) * (static_cast<double>((*this)() >> 11) * 0x1.0p-53));
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Laplace(0, scale) by inverse CDF.
    double laplace(double scale) noexcept {
        const double u = uniform() - 0.5;
        return -scale * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
    }

    /// Standard normal by Box-Muller (one draw per call).
    double normal() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace wireoff
