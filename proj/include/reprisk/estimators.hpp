#ifndef REPRISK_ESTIMATORS_HPP
#define REPRISK_ESTIMATORS_HPP

#include <cstdint>
#include <iosfwd>

#include "reprisk/distributions.hpp"
#include "reprisk/rng.hpp"
#include "reprisk/subjects.hpp"

namespace reprisk {

// Snapshot of a sampling run. `value` is the running mean of weighted
// failure indicators exactly as accumulated; importance-weighted estimates
// may transiently exceed 1 and are never clamped.
struct RiskEstimate {
    double value = 0.0;
    std::uint64_t sample_count = 0;
    std::uint64_t failure_count = 0;
    double mean_weight_sq = 0.0; // running second moment of weighted indicators
    bool terminated = true;      // false when a sequential rule hit its cap
};

struct RhwRule {
    double s_r = 0.001;              // relative-half-width threshold
    double confidence_z = 1.959964;  // two-sided 95%
    std::uint64_t n_min = 100;
    std::uint64_t n_max = 10000000;
    std::uint64_t min_failures = 1;
};

struct TerminationRule {
    enum class Kind { fixed_n, rhw };
    Kind kind = Kind::fixed_n;
    std::uint64_t fixed_n = 1;
    RhwRule rhw;

    void validate() const;

    static TerminationRule fixed(std::uint64_t n);
    static TerminationRule relative_half_width(const RhwRule& rule);
};

// Numerically stable one-pass accumulator (Welford recurrence) over the
// weighted indicator sequence.
class WeightedIndicatorStats {
public:
    void add(double weighted_indicator, bool failed) {
        ++count_;
        const double delta = weighted_indicator - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (weighted_indicator - mean_);
        if (failed) ++failures_;
    }

    RiskEstimate snapshot() const {
        RiskEstimate est;
        est.value = mean_;
        est.sample_count = count_;
        est.failure_count = failures_;
        est.mean_weight_sq = count_ > 0
            ? m2_ / static_cast<double>(count_) + mean_ * mean_
            : 0.0;
        return est;
    }

private:
    std::uint64_t count_ = 0;
    std::uint64_t failures_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

enum class RhwDecision { kContinue, kStop };

// Pure RHW stopping condition: enough samples, enough failures, and
// z * sample_std / (sqrt(n) * value) <= s_r.
bool rhw_satisfied(const RiskEstimate& estimate, const TerminationRule& rule);

// Runtime observer: stop when the condition holds, and unconditionally at
// n_max (the caller flags that case non-terminated).
RhwDecision check_rhw(const RiskEstimate& estimate, const TerminationRule& rule);

// Nominal Monte Carlo: x ~ p, indicators carry weight 1.
RiskEstimate run_monte_carlo(const FailurePredicate& failure, const Distribution& p,
                             const TerminationRule& rule, SeededStream& rng,
                             std::ostream* trace = nullptr);

// Importance sampling: x ~ q, each failure indicator carries weight
// p(x)/q(x). Requires p absolutely continuous w.r.t. q on the failure
// region.
RiskEstimate run_importance_sampling(const FailurePredicate& failure,
                                     const Distribution& p, const Distribution& q,
                                     const TerminationRule& rule, SeededStream& rng,
                                     std::ostream* trace = nullptr);

} // namespace reprisk

#endif
