#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "svcj/data_io.hpp"
#include "svcj/errors.hpp"
#include "svcj/mcmc.hpp"
#include "svcj/parallel.hpp"
#include "svcj/rng.hpp"
#include "svcj/summary.hpp"

namespace svcj {

struct RollingConfig {
    std::size_t window = 150; // n; presets 150, 300, 600
    std::size_t step = 1;
    std::uint64_t base_seed = 0;

    void validate() const {
        if (window < 30) throw validation_error("rolling: window must be >= 30");
        if (step < 1) throw validation_error("rolling: step must be >= 1");
    }
};

// Estimator signature used by the driver; the window slice holds the n
// returns immediately preceding the output date.
using WindowEstimator =
    std::function<PosteriorSummary(std::span<const double>, std::uint64_t)>;

// Shifts the estimation window through the series: the row labelled with the
// date at (1-based) index t is estimated from return indices [t-n, t-1].
// Per-window seeds come from mix_seed(base_seed, t), so output is identical
// under any execution order or parallelism degree. Windows that raise
// numerical_error become missing rows.
inline ParamTimeSeries rolling_estimate_with(const WindowEstimator& estimator,
                                             const ReturnSeries& returns,
                                             const RollingConfig& cfg,
                                             std::size_t parallelism = 1) {
    cfg.validate();
    const std::size_t T = returns.size();
    const std::size_t n = cfg.window;
    if (T < n + 1) throw validation_error("rolling: series shorter than window");

    const std::size_t count = (T - n - 1) / cfg.step + 1;
    ParamTimeSeries out;
    out.window = n;
    out.dates.resize(count);
    out.rows.resize(count);

    parallel_for(count, parallelism, [&](std::size_t i) {
        const std::size_t t = n + 1 + i * cfg.step; // 1-based label index
        const std::span<const double> win(returns.returns.data() + (t - n - 1), n);
        out.dates[i] = returns.dates[t - 1];
        try {
            out.rows[i] = estimator(win, mix_seed(cfg.base_seed, t));
        } catch (const numerical_error&) {
            out.rows[i] = std::nullopt;
        }
    });
    return out;
}

inline ParamTimeSeries rolling_estimate(const ReturnSeries& returns,
                                        const RollingConfig& cfg, const Priors& priors,
                                        const McmcConfig& mcmc_cfg,
                                        std::size_t parallelism = 1) {
    WindowEstimator est = [&](std::span<const double> win, std::uint64_t seed) {
        return estimate_window(win, priors, mcmc_cfg, seed);
    };
    return rolling_estimate_with(est, returns, cfg, parallelism);
}

// Trailing mean of the last w available values. Warm-up indices (fewer than
// w available values so far) emit the mean of everything available; missing
// entries are skipped. An index with nothing available yet stays missing.
inline std::vector<std::optional<double>> moving_average(
    const std::vector<std::optional<double>>& series, std::size_t w = 20) {
    if (w < 1) throw validation_error("moving_average: w must be >= 1");
    std::vector<std::optional<double>> out(series.size());
    std::vector<double> available;
    available.reserve(series.size());
    double window_sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i]) {
            available.push_back(*series[i]);
            window_sum += *series[i];
            if (available.size() > w) window_sum -= available[available.size() - w - 1];
        }
        if (!available.empty()) {
            const std::size_t m = std::min<std::size_t>(w, available.size());
            out[i] = window_sum / double(m);
        }
    }
    return out;
}

// Applies the moving average to every numeric column of a parameter series
// (posterior means and sds alike); a smoothed row is present wherever at
// least one source row has been seen.
inline ParamTimeSeries smooth_param_series(const ParamTimeSeries& series, std::size_t w) {
    ParamTimeSeries out;
    out.window = series.window;
    out.dates = series.dates;
    out.rows.assign(series.size(), std::nullopt);

    std::vector<std::optional<double>> col(series.size());
    std::vector<PosteriorSummary> rows(series.size());
    std::vector<bool> present(series.size(), false);

    auto apply = [&](auto getter, auto setter) {
        for (std::size_t i = 0; i < series.size(); ++i)
            col[i] = series.rows[i] ? std::optional<double>(getter(*series.rows[i]))
                                    : std::nullopt;
        const auto ma = moving_average(col, w);
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (!ma[i]) continue;
            setter(rows[i], *ma[i]);
            present[i] = true;
        }
    };

    for (std::size_t pidx = 0; pidx < SvcjParams::kCount; ++pidx) {
        apply([pidx](const PosteriorSummary& r) { return r.mean[pidx]; },
              [pidx](PosteriorSummary& r, double x) { r.mean.at(pidx) = x; });
        apply([pidx](const PosteriorSummary& r) { return r.sd[pidx]; },
              [pidx](PosteriorSummary& r, double x) { r.sd[pidx] = x; });
    }
    for (std::size_t i = 0; i < series.size(); ++i)
        if (present[i]) out.rows[i] = rows[i];
    return out;
}

} // namespace svcj
