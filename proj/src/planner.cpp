#include "reprisk/planner.hpp"

#include <cmath>

#include "reprisk/errors.hpp"
#include "reprisk/rng.hpp"

namespace reprisk {

namespace {

constexpr double kMaxC = 200.0;
// ceil(exp(x)) must stay representable in the sample-count type.
constexpr double kMaxLogBudget = 42.0;

} // namespace

void PlannerParams::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw InputError("PlannerParams: beta must lie in (0,1)");
    if (!(tau > 0.0 && tau <= 1.0)) throw InputError("PlannerParams: tau must lie in (0,1]");
    if (!(r_bar > 0.0 && r_bar <= 1.0)) throw InputError("PlannerParams: r_bar must lie in (0,1]");
    if (!(c_step > 0.0)) throw InputError("PlannerParams: c_step must be > 0");
    if (gamma_cap && *gamma_cap < 1) throw InputError("PlannerParams: gamma_cap must be >= 1");
}

void PlannerParams::validate_direct() const {
    validate();
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InputError("PlannerParams: epsilon must lie in (0,1)");
    if (!(beta - 2.0 * epsilon > 0.0))
        throw InputError("PlannerParams: need beta - 2*epsilon > 0");
}

BudgetPlan plan_budget(const Distribution& p, const Distribution& q,
                       const PlannerParams& params) {
    params.validate();
    const double kl = kl_divergence(p, q);
    const LogRatioTail tail(p, q);
    const double target = params.beta * params.tau / (params.beta + 1.0);

    const auto lhs_at = [&](double c) {
        return params.r_bar * std::exp(-0.25 * c) +
               2.0 * params.r_bar * std::sqrt(tail.prob_greater(kl + 0.5 * c));
    };

    double c = 0.0;
    double lhs = lhs_at(c);
    for (std::uint64_t k = 1; lhs > target; ++k) {
        c = static_cast<double>(k) * params.c_step;
        if (c > kMaxC)
            throw PlannerDivergedError(
                "plan_budget: feasibility inequality unsatisfied at c = 200; "
                "the importance distribution is pathologically mismatched");
        lhs = lhs_at(c);
    }

    const double log_budget = kl + c;
    if (log_budget > kMaxLogBudget)
        throw PlannerDivergedError("plan_budget: required budget exceeds representable range");

    BudgetPlan plan;
    plan.kl = kl;
    plan.c = c;
    plan.n = static_cast<std::uint64_t>(std::ceil(std::exp(log_budget)));
    plan.lhs_at_c = lhs;
    if (params.gamma_cap) {
        plan.feasible = c <= -kl + std::log(static_cast<double>(*params.gamma_cap));
    }
    return plan;
}

std::uint64_t direct_sample_size(const PlannerParams& params) {
    params.validate_direct();
    const double slack = params.beta - 2.0 * params.epsilon;
    const double n = 4.0 * std::log(2.0 / params.epsilon) /
                     (2.0 * params.tau * params.tau * slack * slack);
    if (!(n < std::exp(kMaxLogBudget)))
        throw PlannerDivergedError("direct_sample_size: budget exceeds representable range");
    return static_cast<std::uint64_t>(std::ceil(n));
}

RoundingGrid make_grid(const PlannerParams& params, GridVariant variant,
                       std::uint64_t grid_seed) {
    RoundingGrid grid;
    if (variant == GridVariant::alg3) {
        params.validate();
        grid.alpha = 2.0 * params.tau / (params.beta + 1.0);
    } else {
        params.validate_direct();
        grid.alpha = 2.0 * params.tau / (params.beta + 1.0 - 2.0 * params.epsilon);
    }
    SeededStream stream(derive_seed(grid_seed,
                                    {static_cast<std::uint64_t>(StreamLabel::rounding_grid)}));
    grid.alpha0 = grid.alpha * stream.uniform01();
    return grid;
}

double repeatability_failure_prob(std::uint64_t n, double tau) {
    if (n < 1) return 1.0;
    if (!(tau > 0.0)) throw InputError("repeatability_failure_prob: tau must be > 0");
    return std::min(1.0, 2.0 * std::exp(-2.0 * static_cast<double>(n) * tau * tau));
}

} // namespace reprisk
