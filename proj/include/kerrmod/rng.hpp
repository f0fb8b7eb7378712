#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace kerrmod {

/// Deterministic Gaussian noise stream for one stochastic trajectory.
///
/// The stream is a pure function of the 64-bit seed: consecutive raw seeds
/// (base + trajectory index) are decorrelated by a splitmix64 scramble
/// before seeding the generator, and normals are produced by an explicit
/// Box-Muller transform so the byte-level output never depends on the
/// standard library's distribution internals.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed) : gen_(scramble(seed)) {}

    /// Two independent N(0,1) draws.
    std::pair<double, double> normal_pair() {
        const double u1 = uniform_open();
        const double u2 = uniform_half_open();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// Complex Wiener increment: independent real and imaginary parts of
    /// variance dt/2 each, so E[dW conj(dW)] = dt and E[dW dW] = 0.
    std::complex<double> wiener(double dt) {
        const auto [g1, g2] = normal_pair();
        const double s = std::sqrt(0.5 * dt);
        return {s * g1, s * g2};
    }

    static std::uint64_t scramble(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 gen_;

    double uniform_open() {  // (0, 1]
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }
    double uniform_half_open() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
};

} // namespace kerrmod
