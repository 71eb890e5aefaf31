#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <vector>

namespace sagin {

/// Mixes a 64-bit value into a well-distributed seed (splitmix64 step).
/// Used to derive pairwise-distinct replica seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random source. All sampling helpers are implemented here rather
/// than with std::*_distribution so that a given seed produces the same
/// stream on every standard library, and so the state round-trips through
/// checkpoints exactly.
class Rng {
public:
    Rng() : engine_(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection-sampled, n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Gaussian via Box-Muller (one value per call; no cached spare so the
    /// draw count per sample is fixed).
    double normal() {
        double u1 = u01();
        while (u1 == 0.0) u1 = u01();
        const double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Poisson(mu) clamped to [0, truncation], sampled by CDF inversion.
    int poisson_trunc(double mu, int truncation) {
        if (mu <= 0.0 || truncation <= 0) return 0;
        const double u = u01();
        double p = std::exp(-mu);
        double cdf = p;
        int k = 0;
        while (u >= cdf && k < truncation) {
            ++k;
            p *= mu / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    std::mt19937_64& engine() { return engine_; }

    friend std::ostream& operator<<(std::ostream& os, const Rng& r) {
        return os << r.engine_;
    }
    friend std::istream& operator>>(std::istream& is, Rng& r) {
        return is >> r.engine_;
    }

private:
    std::mt19937_64 engine_;
};

/// Probability mass of the clamped Poisson min(X, truncation); the last
/// entry absorbs the tail so the vector sums to 1 exactly up to rounding.
inline std::vector<double> truncated_poisson_pmf(double mu, int truncation) {
    std::vector<double> pmf(static_cast<std::size_t>(truncation) + 1, 0.0);
    if (mu <= 0.0 || truncation <= 0) {
        pmf[0] = 1.0;
        pmf.resize(1);
        return pmf;
    }
    double p = std::exp(-mu);
    double below = 0.0;
    for (int k = 0; k < truncation; ++k) {
        pmf[static_cast<std::size_t>(k)] = p;
        below += p;
        p *= mu / static_cast<double>(k + 1);
    }
    pmf[static_cast<std::size_t>(truncation)] = 1.0 - below;
    return pmf;
}

/// Exact mean of the clamped Poisson min(X, truncation), X ~ Poisson(mu).
inline double truncated_poisson_mean(double mu, int truncation) {
    if (mu <= 0.0 || truncation <= 0) return 0.0;
    double p = std::exp(-mu);
    double below = p;   // P(X < truncation)
    double mean = 0.0;
    for (int k = 1; k < truncation; ++k) {
        p *= mu / static_cast<double>(k);
        mean += k * p;
        below += p;
    }
    return mean + truncation * (1.0 - below);
}

}  // namespace sagin
