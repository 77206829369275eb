#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace preslab {

/// Deterministic seeded generator. Uses splitmix64 internally so that identical
/// seeds produce bit-identical streams on every platform; Gaussian samples come
/// from a hand-rolled Box-Muller transform for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard complex Gaussian: E|z|^2 = 1, rotation invariant.
    std::complex<double> next_gaussian() {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        const double r = std::sqrt(-std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    /// Derive an independent child stream. Never share one Rng between tasks;
    /// fork per sample index instead.
    Rng fork(std::uint64_t stream) const {
        std::uint64_t z = state_ ^ (0x94d049bb133111ebULL * (stream + 1));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x9e3779b97f4a7c15ULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::uint64_t state_;
};

}  // namespace preslab
