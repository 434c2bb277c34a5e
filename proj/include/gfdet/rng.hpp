// Counter-based per-trial random streams. A stream is keyed by
// (seed, trial index, stream tag) so trial outcomes do not depend on how
// trials are scheduled across threads. Algorithms are fixed: splitmix64
// bit generation, Box-Muller normals, Marsaglia-Tsang gamma.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace gfdet::rng {

inline constexpr const char* kRngVersion = "splitmix64/box-muller/marsaglia-tsang-v1";

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index, std::uint64_t stream_tag) {
        state_ = mix64(seed + 0x9E3779B97F4A7C15ULL);
        state_ = mix64(state_ ^ (trial_index + 0xD1B54A32D192ED03ULL));
        state_ = mix64(state_ ^ (stream_tag + 0x8CB92BA72F3D8DD7ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform on (0,1]; never 0, safe under log().
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() <= p; }

    // One Box-Muller pair of independent standard normals.
    std::pair<double, double> normal_pair() {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925 * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    double normal() { return normal_pair().first; }

    // CN(0,1): total variance 1, split across real and imaginary parts.
    std::complex<double> complex_normal() {
        const auto [a, b] = normal_pair();
        return {a * 0.7071067811865475244, b * 0.7071067811865475244};
    }

    // Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang squeeze method).
    double gamma(double shape) {
        if (!(shape >= 1.0)) throw std::invalid_argument("TrialRng::gamma: shape must be >= 1");
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double x = normal();
            const double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Chi-square with even dof, as 2 * Gamma(dof/2, 1).
    double chi_square_even(int dof) {
        if (dof < 2 || dof % 2 != 0) {
            throw std::invalid_argument("TrialRng::chi_square_even: dof must be even and >= 2");
        }
        return 2.0 * gamma(0.5 * dof);
    }

  private:
    std::uint64_t state_;
};

}  // namespace gfdet::rng
