#pragma once

#include <cstddef>
#include <vector>

namespace llob {

/// Price displacement time series of one metaorder run. Produced by both
/// simulation engines with identical semantics, so downstream consumers are
/// engine-agnostic.
struct ImpactTrajectory {
    std::vector<double> times;
    std::vector<double> impact;  ///< x_t - x_0
    double peak = 0.0;           ///< impact at t = T
    double plateau = 0.0;        ///< mean impact over the last 10% of the run
    std::size_t steps = 0;

    /// Impact at time t by linear interpolation.
    double at(double t) const {
        if (times.empty()) return 0.0;
        if (t <= times.front()) return impact.front();
        if (t >= times.back()) return impact.back();
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (times[mid] <= t ? lo : hi) = mid;
        }
        double f = (t - times[lo]) / (times[hi] - times[lo]);
        return impact[lo] + f * (impact[hi] - impact[lo]);
    }

    void set_plateau_from_tail(double t_end) {
        double acc = 0.0;
        int n = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] >= 0.9 * t_end) {
                acc += impact[i];
                ++n;
            }
        }
        plateau = n > 0 ? acc / n : (impact.empty() ? 0.0 : impact.back());
    }
};

}  // namespace llob
