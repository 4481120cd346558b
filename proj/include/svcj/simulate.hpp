#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "svcj/errors.hpp"
#include "svcj/params.hpp"
#include "svcj/rng.hpp"

namespace svcj {

// One simulated trajectory. All sequences have the same length T; index t
// holds step t+1 of the recursion (v[t] is V_{t+1} given v0 = V_0).
// Jump sizes at non-jump steps are stored as 0.
struct LatentPath {
    std::vector<double> y;   // log returns (scale follows the parameter units)
    std::vector<double> v;   // variance path, >= 0
    std::vector<std::uint8_t> j; // jump indicators
    std::vector<double> zy;  // return-jump sizes
    std::vector<double> zv;  // volatility-jump sizes, >= 0

    std::size_t size() const { return y.size(); }
};

// Stationary-mean start when it exists, else 1.
inline double default_v0(const SvcjParams& p) {
    if (is_stationary(p)) {
        const double m = (p.alpha + p.lambda * p.mu_v) / (1.0 - p.beta);
        if (m > 0.0) return m;
    }
    return 1.0;
}

// Simulates the discretized SVCJ recursion for `horizon` steps.
// Negative proposed variances are truncated at zero (full truncation).
// Deterministic given (p, v0, horizon, seed); the per-step draw order is
// fixed: jump indicator, jump sizes (only when the indicator fires), then
// the correlated diffusive pair.
inline LatentPath simulate_path(const SvcjParams& p, double v0,
                                std::size_t horizon, std::uint64_t seed) {
    validate_params(p);
    if (horizon == 0) throw validation_error("simulate_path: horizon must be >= 1");
    if (!(std::isfinite(v0) && v0 >= 0.0))
        throw validation_error("simulate_path: v0 must be a nonnegative real");

    Rng rng(seed);
    LatentPath path;
    path.y.resize(horizon);
    path.v.resize(horizon);
    path.j.resize(horizon);
    path.zy.resize(horizon);
    path.zv.resize(horizon);

    const double rho_c = std::sqrt(1.0 - p.rho * p.rho);
    double v_prev = v0;
    for (std::size_t t = 0; t < horizon; ++t) {
        const bool jump = p.lambda > 0.0 && rng.bernoulli(p.lambda);
        double zv = 0.0, zy = 0.0;
        if (jump) {
            zv = rng.exponential(p.mu_v);
            zy = rng.normal(p.mu_y + p.rho_j * zv, p.sigma_y);
        }
        const double n1 = rng.normal();
        const double n2 = rng.normal();
        const double eps_y = n1;
        const double eps_v = p.rho * n1 + rho_c * n2;

        const double sqrt_v = std::sqrt(v_prev);
        path.y[t] = p.mu + sqrt_v * eps_y + (jump ? zy : 0.0);
        const double v_next =
            p.alpha + p.beta * v_prev + p.sigma_v * sqrt_v * eps_v + (jump ? zv : 0.0);
        path.v[t] = v_next > 0.0 ? v_next : 0.0;
        path.j[t] = jump ? 1 : 0;
        path.zy[t] = zy;
        path.zv[t] = zv;
        v_prev = path.v[t];
    }
    return path;
}

} // namespace svcj
