#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "svcj/dates.hpp"
#include "svcj/params.hpp"

namespace svcj {

struct Quantiles {
    double q05 = std::numeric_limits<double>::quiet_NaN();
    double q50 = std::numeric_limits<double>::quiet_NaN();
    double q95 = std::numeric_limits<double>::quiet_NaN();
};

// Posterior of one estimation window, reduced to per-parameter statistics.
struct PosteriorSummary {
    SvcjParams mean;                                  // posterior means
    std::array<double, SvcjParams::kCount> sd{};      // posterior sds
    std::array<Quantiles, SvcjParams::kCount> quantiles{};
    double v_accept_rate = std::numeric_limits<double>::quiet_NaN();
    double avg_jumps_per_sweep = std::numeric_limits<double>::quiet_NaN();
};

// Date-indexed estimates from the rolling driver. A row is missing when its
// window raised numerical_error.
struct ParamTimeSeries {
    std::vector<Date> dates;
    std::vector<std::optional<PosteriorSummary>> rows;
    std::size_t window = 0; // the window size n that produced the rows

    std::size_t size() const { return dates.size(); }
};

} // namespace svcj
