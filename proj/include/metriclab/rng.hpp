#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace metriclab {

// Deterministic splitmix64 stream. Used instead of <random> engines so that
// seeded runs produce identical bytes on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::complex<double> complex_normal() {
        double a = normal();
        double b = normal();
        return {a, b};
    }

    // point uniform in the unit disk
    std::complex<double> unit_disk_point() {
        double r = std::sqrt(uniform());
        double t = 2.0 * M_PI * uniform();
        return std::polar(r, t);
    }

    // derive an independent stream, e.g. per restart or per check id
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
        Rng r(seed ^ (0x632be59bd9b4e019ULL * (salt + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace metriclab
