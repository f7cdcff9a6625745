// SPDX-License-Identifier: Apache-2.0
#pragma once

/// @file random.hpp
/// Seeded, reproducible random draws shared by the design driver, the scene
/// simulator and the tests. Substreams are derived with splitmix64 so that
/// (seed, index) pairs give independent deterministic streams.

#include <cstdint>
#include <random>

#include "pulsecomp/types.hpp"

namespace pulsecomp::rng {

/// splitmix64 finalizer; decorrelates consecutive seeds.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic substream seed for (seed, index).
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(seed ^ mix(index + 1));
}

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Unit-modulus vector with phases uniform on [0, 2pi).
inline CVector random_unimodular(Eigen::Index n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = std::polar(1.0, phase(gen));
    }
    return v;
}

/// Circular complex Gaussian CN(0, variance) scalar.
inline Complex complex_gaussian(double variance, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, std::sqrt(variance * 0.5));
    return {normal(gen), normal(gen)};
}

/// Complex Gaussian vector CN(0, variance I).
inline CVector complex_gaussian_vector(Eigen::Index n, double variance,
                                       std::mt19937_64& gen) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = complex_gaussian(variance, gen);
    }
    return v;
}

} // namespace pulsecomp::rng
