#ifndef CORRSIM_STATS_HPP
#define CORRSIM_STATS_HPP

#include <cmath>
#include <cstdint>

namespace corrsim {

/// Monte Carlo correlation estimate for a +/-1-valued product: the standard
/// error convention is sqrt((1 - mean^2)/trials), which is 0 when every trial
/// agreed.
struct CorrEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;

    static CorrEstimate from_sum(std::int64_t sum, std::int64_t trials) {
        const double m = static_cast<double>(sum) / static_cast<double>(trials);
        return {m, std::sqrt(std::max(0.0, (1.0 - m * m) / static_cast<double>(trials))), trials};
    }
};

} // namespace corrsim

#endif
