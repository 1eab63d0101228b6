#include <cmath>

#include "doctest.h"
#include "reprisk/errors.hpp"
#include "reprisk/planner.hpp"

using namespace reprisk;

namespace {

PlannerParams fig3_params() {
    PlannerParams p;
    p.beta = 0.4;
    p.tau = 0.1;
    p.r_bar = 0.3;
    p.c_step = 0.01;
    p.epsilon = 0.01;
    return p;
}

// Brute-force scan of the feasibility inequality for a two-outcome pair,
// with the tail computed by direct enumeration. Independent of plan_budget.
double brute_force_c(const std::vector<double>& p, const std::vector<double>& q,
                     const PlannerParams& params, double step) {
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) kl += p[i] * std::log(p[i] / q[i]);
    const double target = params.beta * params.tau / (params.beta + 1.0);
    for (int k = 0;; ++k) {
        const double c = k * step;
        double tail = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0.0 && std::log(p[i] / q[i]) > kl + 0.5 * c) tail += p[i];
        const double lhs = params.r_bar * std::exp(-0.25 * c) +
                           2.0 * params.r_bar * std::sqrt(tail);
        if (lhs <= target) return c;
        REQUIRE(c < 300.0);
    }
}

} // namespace

TEST_CASE("planner parameter validation") {
    PlannerParams p = fig3_params();
    p.beta = 1.0;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = fig3_params();
    p.tau = 0.0;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = fig3_params();
    p.epsilon = 0.2; // beta - 2 eps = 0
    CHECK_THROWS_AS(p.validate_direct(), InputError);
    p = fig3_params();
    CHECK_NOTHROW(p.validate_direct());
}

TEST_CASE("p = q budget matches the closed-form fluctuation constant") {
    // tail term vanishes, so c* = 4 ln(r_bar (beta+1) / (beta tau)) = 9.4055,
    // rounded up to the 0.01 grid.
    Categorical p({0.6, 0.4});
    const BudgetPlan plan = plan_budget(p, p, fig3_params());
    CHECK(plan.kl == 0.0);
    CHECK(plan.c == doctest::Approx(9.41).epsilon(1e-12));
    CHECK(plan.n == static_cast<std::uint64_t>(std::ceil(std::exp(9.41))));
    CHECK(plan.n == 12210);
    CHECK(plan.feasible);
    CHECK(plan.lhs_at_c <= 0.4 * 0.1 / 1.4);

    // the step below the accepted c violates the inequality (minimality)
    const double c_prev = plan.c - 0.01;
    CHECK(0.3 * std::exp(-0.25 * c_prev) > 0.4 * 0.1 / 1.4);
}

TEST_CASE("categorical budget matches an independent brute-force scan") {
    const std::vector<double> pv = {0.5, 0.5};
    const std::vector<double> qv = {0.25, 0.75};
    Categorical p(pv);
    Categorical q(qv);
    const PlannerParams params = fig3_params();
    const BudgetPlan plan = plan_budget(p, q, params);
    const double fine = brute_force_c(pv, qv, params, 0.001); // 10x finer grid
    CHECK(std::abs(plan.c - fine) <= params.c_step + 1e-12);
    CHECK(plan.n == static_cast<std::uint64_t>(std::ceil(std::exp(plan.kl + plan.c))));
}

TEST_CASE("plan_budget is deterministic across calls") {
    TruncatedNormal1D p(0.0, 0.5, -0.9, 0.9);
    Uniform1D q(-0.9, 0.9);
    const BudgetPlan a = plan_budget(p, q, fig3_params());
    const BudgetPlan b = plan_budget(p, q, fig3_params());
    CHECK(a.kl == b.kl);
    CHECK(a.c == b.c);
    CHECK(a.n == b.n);
    CHECK(a.lhs_at_c == b.lhs_at_c);
}

TEST_CASE("budget is non-increasing in tau and in beta") {
    Categorical p({0.5, 0.5});
    Categorical q({0.25, 0.75});
    PlannerParams params = fig3_params();

    std::uint64_t prev_n = UINT64_MAX;
    for (double tau : {0.02, 0.05, 0.1, 0.2, 0.5}) {
        params.tau = tau;
        const std::uint64_t n = plan_budget(p, q, params).n;
        CHECK(n <= prev_n);
        prev_n = n;
    }
    params = fig3_params();
    prev_n = UINT64_MAX;
    for (double beta : {0.1, 0.2, 0.4, 0.6, 0.8}) {
        params.beta = beta;
        const std::uint64_t n = plan_budget(p, q, params).n;
        CHECK(n <= prev_n);
        prev_n = n;
    }
}

TEST_CASE("gamma cap settles feasibility") {
    Categorical p({0.6, 0.4});
    PlannerParams params = fig3_params();
    params.gamma_cap = 20000; // e^9.41 = 12210 fits
    CHECK(plan_budget(p, p, params).feasible);
    params.gamma_cap = 10000; // needs c <= ln(10000) = 9.21 < 9.41
    CHECK_FALSE(plan_budget(p, p, params).feasible);
}

TEST_CASE("pathological q diverges the scan") {
    Categorical p({0.5, 0.5});
    Categorical q({1e-300, 1.0 - 1e-300});
    CHECK_THROWS_AS(plan_budget(p, q, fig3_params()), PlannerDivergedError);
}

TEST_CASE("direct sample sizes match the formula evaluations") {
    PlannerParams params = fig3_params(); // beta 0.4, tau 0.1, eps 0.01
    CHECK(direct_sample_size(params) == 7339);
    params.beta = 0.5;
    params.tau = 0.5;
    params.epsilon = 0.1;
    CHECK(direct_sample_size(params) == 267);
}

TEST_CASE("direct sample size grows monotonically as epsilon approaches beta/2") {
    PlannerParams params = fig3_params();
    std::uint64_t prev = 0;
    for (double eps : {0.01, 0.05, 0.1, 0.15, 0.19, 0.199}) {
        params.epsilon = eps;
        const std::uint64_t n = direct_sample_size(params);
        CHECK(n >= prev);
        prev = n;
    }
    params.epsilon = 0.2;
    CHECK_THROWS_AS(direct_sample_size(params), InputError);
}

TEST_CASE("grid alphas per variant formula") {
    const PlannerParams params = fig3_params();
    const RoundingGrid alg3 = make_grid(params, GridVariant::alg3, 1);
    CHECK(alg3.alpha == doctest::Approx(0.2 / 1.4).epsilon(1e-15));
    const RoundingGrid direct = make_grid(params, GridVariant::direct, 1);
    CHECK(direct.alpha == doctest::Approx(0.2 / 1.38).epsilon(1e-15));
    CHECK(alg3.alpha0 >= 0.0);
    CHECK(alg3.alpha0 <= alg3.alpha);
}

TEST_CASE("alpha0 is a pure function of the grid seed") {
    const PlannerParams params = fig3_params();
    const RoundingGrid a = make_grid(params, GridVariant::alg3, 555);
    const RoundingGrid b = make_grid(params, GridVariant::alg3, 555);
    const RoundingGrid c = make_grid(params, GridVariant::alg3, 556);
    CHECK(a.alpha0 == b.alpha0);
    CHECK(a.alpha0 != c.alpha0);
}

TEST_CASE("repeatability failure probability") {
    CHECK(repeatability_failure_prob(100, 0.1) ==
          doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-15));
    CHECK(repeatability_failure_prob(0, 0.1) == 1.0);
    CHECK(repeatability_failure_prob(1, 1e-9) == 1.0); // capped at 1
    CHECK(repeatability_failure_prob(145800, 0.1) < 1e-300);
    CHECK_THROWS_AS(repeatability_failure_prob(10, 0.0), InputError);
}
