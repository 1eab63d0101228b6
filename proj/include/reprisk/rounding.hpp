#ifndef REPRISK_ROUNDING_HPP
#define REPRISK_ROUNDING_HPP

#include <cstdint>

#include "reprisk/planner.hpp"

namespace reprisk {

// Estimate mapped to its grid interval representative. interval_index = -1
// encodes the [0, alpha0] head interval.
struct RoundedEstimate {
    double value = 0.0;
    std::int64_t interval_index = -1;
    double raw = 0.0; // pre-rounding estimate, retained for audit
};

// Randomized-interval rounding:
//   raw <= alpha0             -> alpha0 / 2
//   otherwise                 -> alpha/2 + alpha * round((raw - alpha0)/alpha)
// round() ties break away from zero. The raw estimate is not clamped.
RoundedEstimate round_estimate(double raw, const RoundingGrid& grid);

// Worst-case offset the rounding applies when alpha0 = alpha/2; tests use it
// as |value - raw| <= alpha/2 + alpha0/2 on the head interval and
// |value - raw| <= alpha elsewhere.
double rounding_offset_bound(const RoundingGrid& grid);

} // namespace reprisk

#endif
