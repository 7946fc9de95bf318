#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace bidisc {

// Seeded splitmix64 stream. Used instead of <random> engines so that identical
// seeds give byte-identical output on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform w.r.t. area in the Euclidean disc |z - center| < radius.
    std::complex<double> disc(std::complex<double> center, double radius) {
        const double r = radius * std::sqrt(uniform());
        const double phi = 2.0 * M_PI * uniform();
        return center + std::polar(r, phi);
    }

    // Uniform in the disc of given radius about the origin.
    std::complex<double> unit_disc(double radius = 1.0) { return disc({0.0, 0.0}, radius); }

private:
    std::uint64_t state_;
};

} // namespace bidisc
