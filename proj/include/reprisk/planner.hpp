#ifndef REPRISK_PLANNER_HPP
#define REPRISK_PLANNER_HPP

#include <cstdint>
#include <optional>

#include "reprisk/distributions.hpp"

namespace reprisk {

struct PlannerParams {
    double beta = 0.4;    // repeatability failure budget, in (0,1)
    double tau = 0.1;     // accuracy bound, in (0,1]
    double r_bar = 0.3;   // worst-case risk over the subject class, in (0,1]
    double c_step = 0.01; // fluctuation-constant scan step
    std::optional<std::uint64_t> gamma_cap; // optional effort cap
    double epsilon = 0.01; // confidence coefficient, distribution-agnostic planner only

    void validate() const;
    void validate_direct() const; // additionally requires beta - 2*epsilon > 0
};

// Output of the distribution-dependent budget search: the sample count is a
// pure deterministic function of (p, q, params).
struct BudgetPlan {
    double kl = 0.0;       // D(p||q)
    double c = 0.0;        // accepted fluctuation constant
    std::uint64_t n = 1;   // ceil(exp(kl + c))
    bool feasible = true;  // c <= -kl + log(gamma_cap), when a cap is given
    double lhs_at_c = 0.0; // left side of the feasibility inequality at c
};

// Randomized output grid: intervals of width alpha with a randomly drawn
// first-interval width alpha0; alpha0 is the shared secret that makes
// independent executions land on identical outputs.
struct RoundingGrid {
    double alpha = 0.0;
    double alpha0 = 0.0;
};

enum class GridVariant { alg3, direct };

// Scans c upward from zero in c_step increments until
//   r_bar * e^{-c/4} + 2 r_bar * sqrt(P(log p/q > D + c/2)) <= beta*tau/(beta+1),
// then fixes n = ceil(e^{D + c}). Deterministic. Throws PlannerDivergedError
// if the inequality is still violated at c = 200 or the budget overflows.
BudgetPlan plan_budget(const Distribution& p, const Distribution& q,
                       const PlannerParams& params);

// Distribution-agnostic sample size: ceil(4 ln(2/eps) / (2 tau^2 (beta-2eps)^2)).
std::uint64_t direct_sample_size(const PlannerParams& params);

// alpha from the variant formula; alpha0 drawn once from U([0, alpha]) using
// grid_seed only, never a trial seed.
RoundingGrid make_grid(const PlannerParams& params, GridVariant variant,
                       std::uint64_t grid_seed);

// Hoeffding bound on missing the accuracy band: min(1, 2 e^{-2 n tau^2}).
double repeatability_failure_prob(std::uint64_t n, double tau);

} // namespace reprisk

#endif
