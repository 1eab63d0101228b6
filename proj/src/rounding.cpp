#include "reprisk/rounding.hpp"

#include <cmath>

#include "reprisk/errors.hpp"

namespace reprisk {

RoundedEstimate round_estimate(double raw, const RoundingGrid& grid) {
    if (!std::isfinite(raw) || raw < 0.0)
        throw InputError("round_estimate: raw estimate must be finite and non-negative");
    if (!(grid.alpha > 0.0) || grid.alpha0 < 0.0 || grid.alpha0 > grid.alpha)
        throw InputError("round_estimate: invalid rounding grid");

    RoundedEstimate out;
    out.raw = raw;
    if (raw <= grid.alpha0) {
        out.interval_index = -1;
        out.value = 0.5 * grid.alpha0;
        return out;
    }
    // std::round ties away from zero, the documented tie-break.
    const double k = std::round((raw - grid.alpha0) / grid.alpha);
    out.interval_index = static_cast<std::int64_t>(k);
    out.value = 0.5 * grid.alpha + grid.alpha * k;
    return out;
}

double rounding_offset_bound(const RoundingGrid& grid) {
    if (!(grid.alpha > 0.0))
        throw InputError("rounding_offset_bound: invalid rounding grid");
    return 0.5 * grid.alpha;
}

} // namespace reprisk
