#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "svcj/errors.hpp"

namespace svcj {

// The ten-parameter family of the discretized SVCJ model
//   Y_t = mu + sqrt(V_{t-1}) eps^y_t + Z^y_t J_t
//   V_t = alpha + beta V_{t-1} + sigma_v sqrt(V_{t-1}) eps^v_t + Z^v_t J_t
// with J_t ~ Bernoulli(lambda), Z^v_t ~ Exp(mean mu_v),
// Z^y_t | Z^v_t ~ N(mu_y + rho_j Z^v_t, sigma_y^2), corr(eps^y, eps^v) = rho.
struct SvcjParams {
    double mu = 0.0;       // per-step return drift
    double mu_y = 0.0;     // mean of return-jump size
    double sigma_y = 1.0;  // sd of return-jump size, > 0
    double lambda = 0.0;   // per-step jump probability, in [0,1]
    double alpha = 0.0;    // volatility drift
    double beta = 0.0;     // lagged-volatility coefficient
    double rho = 0.0;      // diffusive shock correlation, in (-1,1)
    double sigma_v = 1.0;  // volatility of volatility, > 0
    double rho_j = 0.0;    // loading of Z^v in the Z^y mean
    double mu_v = 1.0;     // mean of exponential volatility-jump size, > 0

    static constexpr std::size_t kCount = 10;

    static const std::array<const char*, kCount>& names() {
        static const std::array<const char*, kCount> n = {
            "mu", "mu_y", "sigma_y", "lambda", "alpha",
            "beta", "rho", "sigma_v", "rho_j", "mu_v"};
        return n;
    }

    double operator[](std::size_t i) const {
        const double* f[kCount] = {&mu, &mu_y, &sigma_y, &lambda, &alpha,
                                   &beta, &rho, &sigma_v, &rho_j, &mu_v};
        return *f[i];
    }

    double& at(std::size_t i) {
        double* f[kCount] = {&mu, &mu_y, &sigma_y, &lambda, &alpha,
                             &beta, &rho, &sigma_v, &rho_j, &mu_v};
        return *f[i];
    }
};

// Constraint violations by field name; empty means the set is usable.
inline std::vector<std::string> param_violations(const SvcjParams& p) {
    std::vector<std::string> bad;
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.mu)) bad.push_back("mu: not finite");
    if (!finite(p.mu_y)) bad.push_back("mu_y: not finite");
    if (!(finite(p.sigma_y) && p.sigma_y > 0.0)) bad.push_back("sigma_y: must be > 0");
    if (!(finite(p.lambda) && p.lambda >= 0.0 && p.lambda <= 1.0))
        bad.push_back("lambda: must be in [0,1]");
    if (!finite(p.alpha)) bad.push_back("alpha: not finite");
    if (!finite(p.beta)) bad.push_back("beta: not finite");
    if (!(finite(p.rho) && p.rho > -1.0 && p.rho < 1.0))
        bad.push_back("rho: must be in (-1,1)");
    if (!(finite(p.sigma_v) && p.sigma_v > 0.0)) bad.push_back("sigma_v: must be > 0");
    if (!finite(p.rho_j)) bad.push_back("rho_j: not finite");
    if (!(finite(p.mu_v) && p.mu_v > 0.0)) bad.push_back("mu_v: must be > 0");
    return bad;
}

// |beta| >= 1 is allowed but flagged: the variance recursion has no
// stationary mean there.
inline bool is_stationary(const SvcjParams& p) { return std::fabs(p.beta) < 1.0; }

inline void validate_params(const SvcjParams& p) {
    const auto bad = param_violations(p);
    if (bad.empty()) return;
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& b : bad) os << " [" << b << "]";
    throw validation_error(os.str());
}

struct ImpliedMoments {
    double mean_return = 0.0;
    // Defined only for |beta| < 1.
    std::optional<double> stationary_mean_v;
};

// Closed-form expectations of the two recursions, used as simulation oracles.
//   E[Y]   = mu + lambda (mu_y + rho_j mu_v)
//   E[V]   = (alpha + lambda mu_v) / (1 - beta)      (|beta| < 1)
inline ImpliedMoments implied_moments(const SvcjParams& p) {
    validate_params(p);
    ImpliedMoments m;
    m.mean_return = p.mu + p.lambda * (p.mu_y + p.rho_j * p.mu_v);
    if (is_stationary(p))
        m.stationary_mean_v = (p.alpha + p.lambda * p.mu_v) / (1.0 - p.beta);
    return m;
}

inline double stationary_mean_v(const SvcjParams& p) {
    const auto m = implied_moments(p);
    if (!m.stationary_mean_v) throw validation_error("nonstationary: |beta| >= 1");
    return *m.stationary_mean_v;
}

} // namespace svcj
