#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "svcj/errors.hpp"

namespace svcj {

inline constexpr std::uint64_t kGolden64 = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer. Used as the fixed hash behind per-task seeds so that
// results never depend on execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden64;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed for task `k` from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
    return splitmix64(splitmix64(base) ^ splitmix64(k));
}

inline double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

// log N(x; mean, var)
inline double log_norm_pdf(double x, double mean, double var) {
    static const double log_2pi = 1.8378770664093454836;
    const double d = x - mean;
    return -0.5 * (log_2pi + std::log(var) + d * d / var);
}

// Seeded draw source. One instance per chain / simulation / restart; never
// shared across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // U(0,1), never exactly 0 or 1.
    double uniform() {
        return std::uniform_real_distribution<double>(
            std::numeric_limits<double>::min(), 1.0)(engine_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    double normal() { return std::normal_distribution<double>()(engine_); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential(double mean) {
        return std::exponential_distribution<double>(1.0 / mean)(engine_);
    }

    double gamma(double shape, double scale) {
        return std::gamma_distribution<double>(shape, scale)(engine_);
    }

    // IG(shape a, scale b): density ~ x^{-a-1} exp(-b/x), mean b/(a-1) for a>1.
    double inverse_gamma(double shape, double scale) {
        return scale / gamma(shape, 1.0);
    }

    double beta(double a, double b) {
        const double g1 = gamma(a, 1.0);
        const double g2 = gamma(b, 1.0);
        return g1 / (g1 + g2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Exact draw from N(mean, sd^2) truncated to [lo, inf).
    // Plain rejection when the bound sits left of the bulk, Robert's
    // translated-exponential rejection when it sits in the upper tail.
    double left_truncated_normal(double mean, double sd, double lo) {
        if (!(sd > 0.0)) throw numerical_error("left_truncated_normal: sd must be positive");
        const double alpha = (lo - mean) / sd;
        if (alpha < 0.4) {
            for (;;) {
                const double z = normal();
                if (z >= alpha) return mean + sd * z;
            }
        }
        const double lam = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
        for (;;) {
            const double z = alpha - std::log(uniform()) / lam;
            const double d = z - lam;
            if (std::log(uniform()) <= -0.5 * d * d) return mean + sd * z;
        }
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace svcj
