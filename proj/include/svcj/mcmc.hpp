#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "svcj/errors.hpp"
#include "svcj/params.hpp"
#include "svcj/rng.hpp"
#include "svcj/summary.hpp"

namespace svcj {

struct NormalPrior {
    double mean = 0.0;
    double var = 1.0;
};

// IG(shape a, scale b): mean b/(a-1) for a > 1.
struct InverseGammaPrior {
    double shape = 1.0;
    double scale = 1.0;
};

struct BetaPrior {
    double a = 1.0;
    double b = 1.0;
};

struct BivariateNormalPrior {
    double mean1 = 0.0, mean2 = 0.0;
    double var1 = 1.0, var2 = 1.0;
    double cov = 0.0;
};

// Weakly informative defaults; every field is config-exposed.
// The diffusive correlation enters through the reparameterization
//   psi = rho sigma_v,  omega = sigma_v^2 (1 - rho^2),
// which turns the (rho, sigma_v) block into a conjugate normal/inverse-gamma
// regression. The psi prior variance is psi_var_factor * omega.
struct Priors {
    NormalPrior mu{0.0, 25.0};
    NormalPrior mu_y{0.0, 100.0};
    InverseGammaPrior sigma_y_sq{5.0, 20.0};
    BetaPrior lambda{2.0, 40.0};
    BivariateNormalPrior alpha_beta{0.0, 0.0, 1.0, 1.0, 0.0};
    InverseGammaPrior mu_v{10.0, 20.0};
    NormalPrior rho_j{0.0, 4.0};
    double psi_mean = 0.0;
    double psi_var_factor = 0.5;
    InverseGammaPrior omega{2.5, 0.1};

    void validate() const {
        auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
        if (!pos(mu.var) || !pos(mu_y.var) || !pos(rho_j.var))
            throw validation_error("priors: normal variances must be positive");
        if (!pos(sigma_y_sq.shape) || !pos(sigma_y_sq.scale) || !pos(mu_v.shape) ||
            !pos(mu_v.scale) || !pos(omega.shape) || !pos(omega.scale))
            throw validation_error("priors: inverse-gamma shapes/scales must be positive");
        if (!pos(lambda.a) || !pos(lambda.b))
            throw validation_error("priors: beta parameters must be positive");
        if (!pos(alpha_beta.var1) || !pos(alpha_beta.var2) ||
            alpha_beta.var1 * alpha_beta.var2 <= alpha_beta.cov * alpha_beta.cov)
            throw validation_error("priors: alpha_beta covariance must be positive definite");
        if (!pos(psi_var_factor))
            throw validation_error("priors: psi_var_factor must be positive");
        if (!std::isfinite(psi_mean))
            throw validation_error("priors: psi_mean must be finite");
    }
};

struct McmcConfig {
    std::size_t n_iter = 5000;
    std::size_t burn_in = 2500;
    std::size_t thin = 1;
    double v_proposal_sd = 0.25; // random-walk step on log V_t, tuned in burn-in
    double v_floor = 1e-6;

    void validate() const {
        if (n_iter < 1) throw validation_error("mcmc: n_iter must be >= 1");
        if (burn_in >= n_iter) throw validation_error("mcmc: burn_in must be < n_iter");
        if (thin < 1) throw validation_error("mcmc: thin must be >= 1");
        if (!(v_proposal_sd > 0.0)) throw validation_error("mcmc: v_proposal_sd must be > 0");
        if (!(v_floor > 0.0)) throw validation_error("mcmc: v_floor must be > 0");
    }
};

// Retained (post burn-in, thinned) parameter draws plus sampler diagnostics.
struct Chain {
    std::vector<SvcjParams> draws;
    double v_accept_rate = 0.0;
    double avg_jumps_per_sweep = 0.0;
};

// Single-site random-walk Metropolis step on x = log(value). `log_target_x`
// is the log target density in x-space (change-of-variable terms included).
// Proposals below log(floor_value) are outside the support and rejected.
template <class LogTargetX>
inline std::pair<double, bool> metropolis_log_step(double current_value,
                                                   double proposal_sd,
                                                   double floor_value,
                                                   LogTargetX&& log_target_x,
                                                   Rng& rng) {
    const double x = std::log(current_value);
    const double x_new = x + proposal_sd * rng.normal();
    if (floor_value > 0.0 && x_new < std::log(floor_value))
        return {current_value, false};
    const double delta = log_target_x(x_new) - log_target_x(x);
    if (delta >= 0.0 || std::log(rng.uniform()) < delta)
        return {std::exp(x_new), true};
    return {current_value, false};
}

namespace detail {

// Symmetric positive-definite 2x2 solve and normal draw, used by the
// bivariate conjugate blocks.
struct Sym2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0; // precision matrix
};

inline std::pair<double, double> draw_bivariate_from_precision(
    const Sym2& prec, double b1, double b2, Rng& rng) {
    const double det = prec.a11 * prec.a22 - prec.a12 * prec.a12;
    if (!(det > 0.0) || !std::isfinite(det))
        throw numerical_error("bivariate conditional: precision not positive definite");
    // covariance = inverse precision
    const double c11 = prec.a22 / det;
    const double c12 = -prec.a12 / det;
    const double c22 = prec.a11 / det;
    const double m1 = c11 * b1 + c12 * b2;
    const double m2 = c12 * b1 + c22 * b2;
    const double l11 = std::sqrt(c11);
    const double l21 = c12 / l11;
    const double l22_sq = c22 - l21 * l21;
    if (!(l22_sq > 0.0))
        throw numerical_error("bivariate conditional: covariance not positive definite");
    const double l22 = std::sqrt(l22_sq);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    return {m1 + l11 * z1, m2 + l21 * z1 + l22 * z2};
}

} // namespace detail

// Gibbs sampler with data augmentation for one return window.
//
// Latent state: variance path v[0..T] (v[0] held at its initialization),
// jump indicators j[0..T-1], and jump sizes zy/zv stored as 0 at non-jump
// steps. The jump-indicator update proposes fresh prior jump sizes for
// currently jump-free steps, so the prior densities cancel from the odds and
// the parameter blocks condition on jump-step sizes only.
//
// Update blocks are public so tests can exercise each conditional in
// isolation. `prior_only` drops every data contribution, turning each
// parameter block into an exact prior draw.
class GibbsSampler {
public:
    GibbsSampler(std::span<const double> returns, Priors priors, McmcConfig cfg,
                 std::uint64_t seed)
        : y_(returns.begin(), returns.end()),
          priors_(priors),
          cfg_(cfg),
          rng_(seed),
          v_step_sd_(cfg.v_proposal_sd) {
        priors_.validate();
        cfg_.validate();
        if (y_.size() < 2) throw validation_error("gibbs: need at least 2 returns");
        for (double r : y_)
            if (!std::isfinite(r)) throw validation_error("gibbs: non-finite return");
        init_state();
    }

    std::size_t size() const { return y_.size(); }

    // One full sweep in the fixed block order; returns the number of
    // accepted variance-site moves (out of size()).
    std::size_t sweep() {
        if (!prior_only) {
            update_jumps();
            update_jump_sizes_y();
            update_jump_sizes_v();
        }
        update_lambda();
        update_jump_regression();
        update_sigma_y_sq();
        update_mu_v();
        update_mu();
        update_alpha_beta();
        update_psi_omega();
        return prior_only ? 0 : update_v_path();
    }

    // (1) J_t ~ Bernoulli full conditional given current (or freshly
    // proposed) jump sizes; bivariate residual density via the psi/omega
    // factorization.
    void update_jumps() {
        const SvcjParams& p = params;
        if (p.lambda <= 0.0) {
            std::fill(jumps.begin(), jumps.end(), std::uint8_t(0));
            std::fill(zy.begin(), zy.end(), 0.0);
            std::fill(zv.begin(), zv.end(), 0.0);
            return;
        }
        const double log_lam = std::log(p.lambda);
        const double log_not = std::log1p(-p.lambda);
        for (std::size_t i = 0; i < y_.size(); ++i) {
            double zy_i = zy[i], zv_i = zv[i];
            if (!jumps[i]) {
                zv_i = rng_.exponential(p.mu_v);
                zy_i = rng_.normal(p.mu_y + p.rho_j * zv_i, p.sigma_y);
            }
            const double vl = v[i];
            const double dv = v[i + 1] - p.alpha - p.beta * vl;
            const double ey1 = y_[i] - p.mu - zy_i;
            const double ey0 = y_[i] - p.mu;
            const double log_one = log_lam + log_norm_pdf(ey1, 0.0, vl) +
                                   log_norm_pdf(dv - zv_i, psi * ey1, omega * vl);
            const double log_zero = log_not + log_norm_pdf(ey0, 0.0, vl) +
                                    log_norm_pdf(dv, psi * ey0, omega * vl);
            double p1;
            if (p.lambda >= 1.0) {
                p1 = 1.0;
            } else {
                const double d = log_zero - log_one;
                p1 = d > 36.0 ? 0.0 : 1.0 / (1.0 + std::exp(d));
            }
            const bool jump = rng_.bernoulli(p1);
            jumps[i] = jump ? 1 : 0;
            zy[i] = jump ? zy_i : 0.0;
            zv[i] = jump ? zv_i : 0.0;
        }
    }

    // (2) Z^y_t at jump steps: normal conditional combining both equations
    // with the N(mu_y + rho_j Z^v, sigma_y^2) prior.
    void update_jump_sizes_y() {
        const SvcjParams& p = params;
        const double sy2 = p.sigma_y * p.sigma_y;
        for (std::size_t i = 0; i < y_.size(); ++i) {
            if (!jumps[i]) continue;
            const double vl = v[i];
            const double a = y_[i] - p.mu;
            const double g = (v[i + 1] - p.alpha - p.beta * vl - zv[i]) - psi * a;
            const double prec = 1.0 / sy2 + 1.0 / vl + psi * psi / (omega * vl);
            const double lin = (p.mu_y + p.rho_j * zv[i]) / sy2 + a / vl -
                               psi * g / (omega * vl);
            if (!(prec > 0.0) || !std::isfinite(prec))
                throw numerical_error("jump-size conditional: bad precision");
            zy[i] = rng_.normal(lin / prec, std::sqrt(1.0 / prec));
        }
    }

    // (3) Z^v_t at jump steps: exact truncated-at-zero normal; the
    // exponential prior enters as a linear shift of the mean.
    void update_jump_sizes_v() {
        const SvcjParams& p = params;
        const double sy2 = p.sigma_y * p.sigma_y;
        for (std::size_t i = 0; i < y_.size(); ++i) {
            if (!jumps[i]) continue;
            const double vl = v[i];
            const double ey = y_[i] - p.mu - zy[i];
            const double e = (v[i + 1] - p.alpha - p.beta * vl) - psi * ey;
            const double f = zy[i] - p.mu_y;
            const double prec = 1.0 / (omega * vl) + p.rho_j * p.rho_j / sy2;
            const double lin = e / (omega * vl) + p.rho_j * f / sy2 - 1.0 / p.mu_v;
            if (!(prec > 0.0) || !std::isfinite(prec))
                throw numerical_error("volatility-jump conditional: bad precision");
            zv[i] = rng_.left_truncated_normal(lin / prec, std::sqrt(1.0 / prec), 0.0);
        }
    }

    // (4) lambda ~ Beta(a + sum J, b + T - sum J).
    void update_lambda() {
        const std::size_t nj = prior_only ? 0 : jump_count();
        const std::size_t n = prior_only ? 0 : y_.size();
        params.lambda = rng_.beta(priors_.lambda.a + double(nj),
                                  priors_.lambda.b + double(n - nj));
    }

    // (5) (mu_y, rho_j): normal regression of Z^y on (1, Z^v) over jump steps.
    void update_jump_regression() {
        double n = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
        if (!prior_only) {
            for (std::size_t i = 0; i < y_.size(); ++i) {
                if (!jumps[i]) continue;
                n += 1.0;
                sx += zv[i];
                sxx += zv[i] * zv[i];
                sy += zy[i];
                sxy += zv[i] * zy[i];
            }
        }
        const double isy2 = 1.0 / (params.sigma_y * params.sigma_y);
        detail::Sym2 prec;
        prec.a11 = 1.0 / priors_.mu_y.var + n * isy2;
        prec.a12 = sx * isy2;
        prec.a22 = 1.0 / priors_.rho_j.var + sxx * isy2;
        const double b1 = priors_.mu_y.mean / priors_.mu_y.var + sy * isy2;
        const double b2 = priors_.rho_j.mean / priors_.rho_j.var + sxy * isy2;
        const auto [m_y, r_j] = detail::draw_bivariate_from_precision(prec, b1, b2, rng_);
        params.mu_y = m_y;
        params.rho_j = r_j;
    }

    // (6) sigma_y^2 ~ IG(shape + n_J/2, scale + SSR/2) over jump steps.
    void update_sigma_y_sq() {
        double n = 0.0, ssr = 0.0;
        if (!prior_only) {
            for (std::size_t i = 0; i < y_.size(); ++i) {
                if (!jumps[i]) continue;
                const double r = zy[i] - params.mu_y - params.rho_j * zv[i];
                n += 1.0;
                ssr += r * r;
            }
        }
        const double draw = rng_.inverse_gamma(priors_.sigma_y_sq.shape + 0.5 * n,
                                               priors_.sigma_y_sq.scale + 0.5 * ssr);
        if (!(draw > 0.0) || !std::isfinite(draw))
            throw numerical_error("sigma_y^2 conditional: bad draw");
        params.sigma_y = std::sqrt(draw);
    }

    // (7) mu_v ~ IG(shape + n_J, scale + sum of jump-step Z^v).
    void update_mu_v() {
        double n = 0.0, s = 0.0;
        if (!prior_only) {
            for (std::size_t i = 0; i < y_.size(); ++i) {
                if (!jumps[i]) continue;
                n += 1.0;
                s += zv[i];
            }
        }
        const double draw =
            rng_.inverse_gamma(priors_.mu_v.shape + n, priors_.mu_v.scale + s);
        if (!(draw > 0.0) || !std::isfinite(draw))
            throw numerical_error("mu_v conditional: bad draw");
        params.mu_v = draw;
    }

    // (8) mu: normal conditional; the drift also feeds the V equation
    // through psi, so both residuals contribute.
    void update_mu() {
        double prec_data = 0.0, lin = 0.0;
        if (!prior_only) {
            const double w = 1.0 + psi * psi / omega;
            for (std::size_t i = 0; i < y_.size(); ++i) {
                const double vl = v[i];
                const double r = y_[i] - (jumps[i] ? zy[i] : 0.0);
                const double ev = v[i + 1] - params.alpha - params.beta * vl -
                                  (jumps[i] ? zv[i] : 0.0);
                const double c = ev - psi * r;
                prec_data += w / vl;
                lin += r / vl - psi * c / (omega * vl);
            }
        }
        const double prec = 1.0 / priors_.mu.var + prec_data;
        if (!(prec > 0.0) || !std::isfinite(prec))
            throw numerical_error("mu conditional: bad precision");
        const double mean = (priors_.mu.mean / priors_.mu.var + lin) / prec;
        params.mu = rng_.normal(mean, std::sqrt(1.0 / prec));
    }

    // (9) (alpha, beta): weighted regression of the jump-adjusted V response
    // on (1, V_{t-1}), weights 1/(omega V_{t-1}), Y-residual absorbed via psi.
    void update_alpha_beta() {
        double s1 = 0.0, sv = 0.0, svv = 0.0, sd1 = 0.0, sdv = 0.0;
        if (!prior_only) {
            for (std::size_t i = 0; i < y_.size(); ++i) {
                const double vl = v[i];
                const double w = 1.0 / (omega * vl);
                const double ey = y_[i] - params.mu - (jumps[i] ? zy[i] : 0.0);
                const double d = v[i + 1] - (jumps[i] ? zv[i] : 0.0) - psi * ey;
                s1 += w;
                sv += w * vl;
                svv += w * vl * vl;
                sd1 += w * d;
                sdv += w * d * vl;
            }
        }
        const auto& pr = priors_.alpha_beta;
        const double det0 = pr.var1 * pr.var2 - pr.cov * pr.cov;
        const double ip11 = pr.var2 / det0, ip22 = pr.var1 / det0, ip12 = -pr.cov / det0;
        detail::Sym2 prec{ip11 + s1, ip12 + sv, ip22 + svv};
        const double b1 = ip11 * pr.mean1 + ip12 * pr.mean2 + sd1;
        const double b2 = ip12 * pr.mean1 + ip22 * pr.mean2 + sdv;
        const auto [a, b] = detail::draw_bivariate_from_precision(prec, b1, b2, rng_);
        params.alpha = a;
        params.beta = b;
    }

    // (10) (psi, omega): conjugate normal/inverse-gamma regression of the
    // standardized V residual on the standardized Y residual, then map back
    // sigma_v = sqrt(psi^2 + omega), rho = psi / sigma_v.
    void update_psi_omega() {
        double suu = 0.0, suz = 0.0, szz = 0.0, n = 0.0;
        if (!prior_only) {
            for (std::size_t i = 0; i < y_.size(); ++i) {
                const double sq = std::sqrt(v[i]);
                const double u = (y_[i] - params.mu - (jumps[i] ? zy[i] : 0.0)) / sq;
                const double z = (v[i + 1] - params.alpha - params.beta * v[i] -
                                  (jumps[i] ? zv[i] : 0.0)) / sq;
                suu += u * u;
                suz += u * z;
                szz += z * z;
                n += 1.0;
            }
        }
        const double p0 = 1.0 / priors_.psi_var_factor;
        const double psi0 = priors_.psi_mean;
        const double p_star = p0 + suu;
        const double psi_star = (p0 * psi0 + suz) / p_star;
        const double shape = priors_.omega.shape + 0.5 * n;
        const double scale =
            priors_.omega.scale + 0.5 * (szz + p0 * psi0 * psi0 - p_star * psi_star * psi_star);
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw numerical_error("psi/omega conditional: non-positive scale");
        omega = rng_.inverse_gamma(shape, scale);
        psi = rng_.normal(psi_star, std::sqrt(omega / p_star));
        params.sigma_v = std::sqrt(psi * psi + omega);
        params.rho = psi / params.sigma_v;
    }

    // (11) V path: single-site random-walk Metropolis on log V_t with the
    // current step size; v[0] stays at its initialization. Returns accepted
    // site count.
    std::size_t update_v_path() {
        const std::size_t T = y_.size();
        std::size_t accepted = 0;
        for (std::size_t t = 1; t <= T; ++t) {
            auto log_target_x = [&](double x) {
                return v_site_log_density(t, std::exp(x)) + x;
            };
            const auto [value, ok] =
                metropolis_log_step(v[t], v_step_sd_, cfg_.v_floor, log_target_x, rng_);
            v[t] = value;
            accepted += ok ? 1 : 0;
        }
        return accepted;
    }

    // Log density of the terms containing V_t = vt (value space, no Jacobian).
    double v_site_log_density(std::size_t t, double vt) const {
        const SvcjParams& p = params;
        const std::size_t T = y_.size();
        // observation t-1: vt is the response of the V equation
        const double vl = v[t - 1];
        const double ey = y_[t - 1] - p.mu - (jumps[t - 1] ? zy[t - 1] : 0.0);
        const double ev = vt - p.alpha - p.beta * vl - (jumps[t - 1] ? zv[t - 1] : 0.0);
        double lp = log_norm_pdf(ev, psi * ey, omega * vl);
        if (t < T) {
            // observation t: vt is the lag variance of both equations
            const double ey2 = y_[t] - p.mu - (jumps[t] ? zy[t] : 0.0);
            const double ev2 = v[t + 1] - p.alpha - p.beta * vt - (jumps[t] ? zv[t] : 0.0);
            lp += log_norm_pdf(ey2, 0.0, vt);
            lp += log_norm_pdf(ev2, psi * ey2, omega * vt);
        }
        return lp;
    }

    std::size_t jump_count() const {
        std::size_t n = 0;
        for (auto j : jumps) n += j;
        return n;
    }

    void set_v_step_sd(double sd) { v_step_sd_ = sd; }
    double v_step_sd() const { return v_step_sd_; }
    const std::vector<double>& returns() const { return y_; }
    const Priors& priors() const { return priors_; }
    const McmcConfig& config() const { return cfg_; }
    Rng& rng() { return rng_; }

    // Current draw. sigma_v and rho are kept consistent with (psi, omega).
    SvcjParams params;
    double psi = 0.0;
    double omega = 1.0;
    std::vector<double> v;           // size T+1
    std::vector<std::uint8_t> jumps; // size T
    std::vector<double> zy, zv;      // size T, zero off jump steps

    bool prior_only = false; // test hook: every block samples its prior

private:
    void init_state() {
        const std::size_t T = y_.size();

        params.mu = priors_.mu.mean;
        params.mu_y = priors_.mu_y.mean;
        params.sigma_y = std::sqrt(ig_center(priors_.sigma_y_sq));
        params.lambda = priors_.lambda.a / (priors_.lambda.a + priors_.lambda.b);
        params.alpha = priors_.alpha_beta.mean1;
        params.beta = priors_.alpha_beta.mean2;
        params.mu_v = ig_center(priors_.mu_v);
        params.rho_j = priors_.rho_j.mean;
        omega = ig_center(priors_.omega);
        psi = priors_.psi_mean;
        params.sigma_v = std::sqrt(psi * psi + omega);
        params.rho = psi / params.sigma_v;

        jumps.assign(T, 0);
        zy.assign(T, 0.0);
        zv.assign(T, 0.0);

        // Centered 20-step moving variance of demeaned returns.
        double mean = 0.0;
        for (double r : y_) mean += r;
        mean /= double(T);
        std::vector<double> sq(T);
        for (std::size_t i = 0; i < T; ++i) {
            const double d = y_[i] - mean;
            sq[i] = d * d;
        }
        v.assign(T + 1, cfg_.v_floor);
        for (std::size_t i = 0; i < T; ++i) {
            const std::size_t lo = i >= 10 ? i - 10 : 0;
            const std::size_t hi = std::min(T - 1, i + 9);
            double s = 0.0;
            for (std::size_t k = lo; k <= hi; ++k) s += sq[k];
            v[i + 1] = std::max(cfg_.v_floor, s / double(hi - lo + 1));
        }
        v[0] = v[1];
    }

    static double ig_center(const InverseGammaPrior& p) {
        // prior mean when it exists, otherwise the mode
        return p.shape > 1.0 ? p.scale / (p.shape - 1.0) : p.scale / (p.shape + 1.0);
    }

    std::vector<double> y_;
    Priors priors_;
    McmcConfig cfg_;
    Rng rng_;
    double v_step_sd_;
};

// Runs the full chain for one window: burn-in with proposal-sd adaptation
// (x1.1 above 50% acceptance, x0.9 below 30%, every 100 sweeps, frozen
// afterwards), then thinned retention.
inline Chain run_chain(std::span<const double> returns, const Priors& priors,
                       const McmcConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (returns.size() < 30) throw validation_error("window too short: need >= 30 returns");
    for (double r : returns)
        if (!std::isfinite(r)) throw validation_error("non-finite return in window");

    GibbsSampler sampler(returns, priors, cfg, seed);
    const std::size_t T = sampler.size();

    Chain chain;
    chain.draws.reserve((cfg.n_iter - cfg.burn_in + cfg.thin - 1) / cfg.thin);

    std::size_t tune_acc = 0, tune_att = 0;
    std::size_t post_acc = 0, post_att = 0;
    double jump_sum = 0.0;

    for (std::size_t s = 1; s <= cfg.n_iter; ++s) {
        const std::size_t accepted = sampler.sweep();
        if (s <= cfg.burn_in) {
            tune_acc += accepted;
            tune_att += T;
            if (s % 100 == 0 && tune_att > 0) {
                const double rate = double(tune_acc) / double(tune_att);
                if (rate > 0.5)
                    sampler.set_v_step_sd(sampler.v_step_sd() * 1.1);
                else if (rate < 0.3)
                    sampler.set_v_step_sd(sampler.v_step_sd() * 0.9);
                tune_acc = tune_att = 0;
            }
        } else {
            post_acc += accepted;
            post_att += T;
            if ((s - cfg.burn_in - 1) % cfg.thin == 0) {
                chain.draws.push_back(sampler.params);
                jump_sum += double(sampler.jump_count());
            }
        }
    }

    chain.v_accept_rate = post_att ? double(post_acc) / double(post_att) : 0.0;
    chain.avg_jumps_per_sweep =
        chain.draws.empty() ? 0.0 : jump_sum / double(chain.draws.size());
    return chain;
}

// Per-parameter mean, sample sd, and empirical quantiles with linear
// interpolation between order statistics.
inline PosteriorSummary summarize(const Chain& chain,
                                  std::array<double, 3> levels = {0.05, 0.5, 0.95}) {
    const std::size_t n = chain.draws.size();
    if (n < 2) throw validation_error("summarize: need at least 2 retained draws");

    PosteriorSummary out;
    out.v_accept_rate = chain.v_accept_rate;
    out.avg_jumps_per_sweep = chain.avg_jumps_per_sweep;

    std::vector<double> col(n);
    for (std::size_t pidx = 0; pidx < SvcjParams::kCount; ++pidx) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = chain.draws[i][pidx];
            mean += col[i];
        }
        mean /= double(n);
        double ss = 0.0;
        for (double x : col) ss += (x - mean) * (x - mean);
        out.mean.at(pidx) = mean;
        out.sd[pidx] = std::sqrt(ss / double(n - 1));

        std::sort(col.begin(), col.end());
        auto quantile = [&](double q) {
            const double h = q * double(n - 1);
            const std::size_t lo = static_cast<std::size_t>(h);
            if (lo + 1 >= n) return col[n - 1];
            const double frac = h - double(lo);
            return col[lo] + frac * (col[lo + 1] - col[lo]);
        };
        out.quantiles[pidx] = {quantile(levels[0]), quantile(levels[1]), quantile(levels[2])};
    }
    return out;
}

// Bayesian estimate of one return window. Deterministic given
// (returns, priors, cfg, seed).
inline PosteriorSummary estimate_window(std::span<const double> returns,
                                        const Priors& priors, const McmcConfig& cfg,
                                        std::uint64_t seed) {
    return summarize(run_chain(returns, priors, cfg, seed));
}

} // namespace svcj
