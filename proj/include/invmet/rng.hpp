#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "invmet/complex_vec.hpp"

namespace invmet {

// Deterministic PRNG (xoshiro256** seeded through splitmix64). The standard
// <random> distributions are implementation-defined, which would break the
// byte-identical-output contract, so sampling transforms are hand-rolled.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    /// Derive an independent stream, for per-task seeding.
    Rng fork(std::uint64_t salt) const {
        std::uint64_t x = s_[0] ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
        return Rng(x ^ s_[3]);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Log-uniform over [a,b], a,b > 0.
    double log_uniform(double a, double b) {
        return std::exp(uniform(std::log(a), std::log(b)));
    }

    double normal() {
        // Box-Muller without caching keeps the stream position predictable.
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cplx unit_phase() {
        double th = uniform(0.0, 2.0 * std::numbers::pi);
        return cplx(std::cos(th), std::sin(th));
    }

    cplx gaussian_cplx() { return cplx(normal(), normal()); }

    ComplexVector gaussian_vector(std::size_t n) {
        ComplexVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = gaussian_cplx();
        return v;
    }

    ComplexVector unit_vector(std::size_t n) {
        ComplexVector v = gaussian_vector(n);
        while (v.norm() < 1e-12) v = gaussian_vector(n);
        return normalized(v);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
};

/// Quasi-uniform unit directions on the sphere of C^n (real dimension 2n-1),
/// Fibonacci/Kronecker style: the R_d low-discrepancy lattice (powers of the
/// generalized golden ratio) pushed through Box-Muller and normalized.
/// Deterministic, no seed.
inline std::vector<ComplexVector> quasi_unit_directions(std::size_t n, std::size_t count) {
    const std::size_t reals = 2 * n;
    // phi_d solves x^{d+1} = x + 1; generators are its inverse powers.
    double phi = 1.5;
    for (int it = 0; it < 64; ++it)
        phi = std::pow(1.0 + phi, 1.0 / (static_cast<double>(reals) + 1.0));
    std::vector<double> gen(reals);
    for (std::size_t j = 0; j < reals; ++j) {
        double g = std::pow(1.0 / phi, static_cast<double>(j + 1));
        gen[j] = g - std::floor(g);
    }
    std::vector<ComplexVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> x(reals);
        for (std::size_t j = 0; j < reals; ++j) {
            double v = (static_cast<double>(i + 1) * gen[j]);
            v -= std::floor(v);
            x[j] = v;
        }
        // Pair up coordinates through Box-Muller to get a rotation-free
        // gaussian-like cloud, then normalize onto the sphere.
        ComplexVector u(n);
        for (std::size_t c = 0; c < n; ++c) {
            double u1 = std::max(x[2 * c], 1e-12);
            double u2 = x[2 * c + 1];
            double r = std::sqrt(-2.0 * std::log(u1));
            u[c] = cplx(r * std::cos(2.0 * std::numbers::pi * u2),
                        r * std::sin(2.0 * std::numbers::pi * u2));
        }
        if (u.norm() < 1e-9) u[0] = cplx(1.0, 0.0);
        out.push_back(normalized(u));
    }
    return out;
}

} // namespace invmet
