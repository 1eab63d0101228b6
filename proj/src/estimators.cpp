#include "reprisk/estimators.hpp"

#include <cmath>
#include <ostream>

#include "reprisk/errors.hpp"

namespace reprisk {

void TerminationRule::validate() const {
    if (kind == Kind::fixed_n) {
        if (fixed_n < 1) throw InputError("TerminationRule: fixed_n must be >= 1");
        return;
    }
    if (!(rhw.s_r > 0.0 && rhw.s_r < 1.0))
        throw InputError("TerminationRule: s_r must lie in (0, 1)");
    if (!(rhw.confidence_z > 0.0))
        throw InputError("TerminationRule: confidence_z must be > 0");
    if (rhw.n_min < 2) throw InputError("TerminationRule: n_min must be >= 2");
    if (rhw.n_max < rhw.n_min) throw InputError("TerminationRule: n_max must be >= n_min");
}

TerminationRule TerminationRule::fixed(std::uint64_t n) {
    TerminationRule rule;
    rule.kind = Kind::fixed_n;
    rule.fixed_n = n;
    rule.validate();
    return rule;
}

TerminationRule TerminationRule::relative_half_width(const RhwRule& rhw_rule) {
    TerminationRule rule;
    rule.kind = Kind::rhw;
    rule.rhw = rhw_rule;
    rule.validate();
    return rule;
}

bool rhw_satisfied(const RiskEstimate& estimate, const TerminationRule& rule) {
    const RhwRule& r = rule.rhw;
    if (estimate.sample_count < r.n_min) return false;
    if (estimate.failure_count < r.min_failures) return false;
    if (!(estimate.value > 0.0)) return false;
    const auto n = static_cast<double>(estimate.sample_count);
    const double population_var =
        std::max(0.0, estimate.mean_weight_sq - estimate.value * estimate.value);
    const double sample_std = std::sqrt(population_var * n / (n - 1.0));
    const double rhw = r.confidence_z * sample_std / (std::sqrt(n) * estimate.value);
    return rhw <= r.s_r;
}

RhwDecision check_rhw(const RiskEstimate& estimate, const TerminationRule& rule) {
    if (rule.kind != TerminationRule::Kind::rhw)
        throw InputError("check_rhw: rule kind is not rhw");
    if (estimate.sample_count >= rule.rhw.n_max) return RhwDecision::kStop;
    return rhw_satisfied(estimate, rule) ? RhwDecision::kStop : RhwDecision::kContinue;
}

namespace {

// WeightFn maps a drawn point to the weight its indicator carries.
template <typename WeightFn>
RiskEstimate run_sampling_loop(const FailurePredicate& failure, const Distribution& draw_from,
                               WeightFn&& weight_of, const TerminationRule& rule,
                               SeededStream& rng, std::ostream* trace) {
    rule.validate();
    WeightedIndicatorStats stats;
    for (;;) {
        const SamplePoint x = draw_from.draw(rng);
        const bool failed = failure(x);
        const double weight = weight_of(x);
        const double weighted = failed ? weight : 0.0;
        stats.add(weighted, failed);
        const RiskEstimate estimate = stats.snapshot();
        if (trace) {
            (*trace) << estimate.sample_count << ',' << x << ',' << weight << ','
                     << (failed ? 1 : 0) << ',' << estimate.value << '\n';
        }
        if (rule.kind == TerminationRule::Kind::fixed_n) {
            if (estimate.sample_count >= rule.fixed_n) {
                RiskEstimate out = estimate;
                out.terminated = true;
                return out;
            }
        } else if (check_rhw(estimate, rule) == RhwDecision::kStop) {
            RiskEstimate out = estimate;
            out.terminated = rhw_satisfied(estimate, rule);
            return out;
        }
    }
}

} // namespace

RiskEstimate run_monte_carlo(const FailurePredicate& failure, const Distribution& p,
                             const TerminationRule& rule, SeededStream& rng,
                             std::ostream* trace) {
    return run_sampling_loop(failure, p, [](SamplePoint) { return 1.0; }, rule, rng, trace);
}

RiskEstimate run_importance_sampling(const FailurePredicate& failure,
                                     const Distribution& p, const Distribution& q,
                                     const TerminationRule& rule, SeededStream& rng,
                                     std::ostream* trace) {
    return run_sampling_loop(
        failure, q,
        [&](SamplePoint x) { return p.density(x) / q.density(x); },
        rule, rng, trace);
}

} // namespace reprisk
