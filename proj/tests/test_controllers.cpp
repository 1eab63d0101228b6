#include <cmath>

#include "doctest.h"
#include "reprisk/controllers.hpp"
#include "reprisk/errors.hpp"
#include "reprisk/oracle.hpp"
#include "reprisk/subjects.hpp"

using namespace reprisk;

namespace {

PendulumSubject default_subject() {
    PendulumSubject s;
    s.validate();
    return s;
}

} // namespace

TEST_CASE("riccati closed form satisfies the CARE residual") {
    const PendulumParams params = default_subject().params;
    const LqrWeights w{10.0, 1.0, 1.0};
    const Riccati2x2 p = solve_riccati_upright(w, params);

    const double inertia = params.mass * params.length * params.length;
    const double a = params.gravity / params.length;
    const double c = params.friction / inertia;
    const double b = 1.0 / inertia;

    // residual of A'P + PA - P B R^-1 B' P + Q, entry by entry
    const double s = b * b / w.r;
    const double r11 = 2.0 * a * p.p12 - s * p.p12 * p.p12 + w.q_theta;
    const double r12 = p.p11 - c * p.p12 + a * p.p22 - s * p.p12 * p.p22;
    const double r22 = 2.0 * (p.p12 - c * p.p22) - s * p.p22 * p.p22 + w.q_omega;
    CHECK(std::abs(r11) < 1e-9);
    CHECK(std::abs(r12) < 1e-9);
    CHECK(std::abs(r22) < 1e-9);

    // positive definiteness and closed-loop stability
    CHECK(p.p11 > 0.0);
    CHECK(p.p11 * p.p22 - p.p12 * p.p12 > 0.0);
    const LqrGain k = lqr_gain(w, params);
    const double trace = -c - b * k.k_omega;
    const double det = -(a - b * k.k_theta) + 0.0; // det of [[0,1],[a-bk1, -c-bk2]]
    CHECK(trace < 0.0);
    CHECK(det > 0.0);
}

TEST_CASE("all controllers command zero at the upright equilibrium") {
    const PendulumSubject subject = default_subject();
    for (const ControllerSpec& spec :
         {ControllerSpec{PidGains{}}, ControllerSpec{LqrWeights{}}, ControllerSpec{NmpcConfig{}}}) {
        ControllerRuntime runtime(spec, subject.params);
        CHECK(runtime.command(PendulumState{}) == 0.0);
    }
}

TEST_CASE("commands are restoring for a small positive angle") {
    const PendulumSubject subject = default_subject();
    PendulumState tilted;
    tilted.theta = 0.01;
    for (const ControllerSpec& spec :
         {ControllerSpec{PidGains{}}, ControllerSpec{LqrWeights{}}, ControllerSpec{NmpcConfig{}}}) {
        ControllerRuntime runtime(spec, subject.params);
        CHECK(runtime.command(tilted) < 0.0);
    }
    // LQR command magnitude is the closed-form gain
    const LqrGain k = lqr_gain(LqrWeights{}, subject.params);
    ControllerRuntime lqr(LqrWeights{}, subject.params);
    CHECK(lqr.command(tilted) == doctest::Approx(-k.k_theta * 0.01).epsilon(1e-12));
}

TEST_CASE("nmpc solver: more iterations do not worsen the plan cost") {
    const PendulumSubject subject = default_subject();
    PendulumState pushed;
    pushed.theta_dot = 0.25;

    double prev_cost = 0.0;
    bool first = true;
    for (int iters : {1, 5, 30}) {
        NmpcConfig cfg;
        cfg.iterations = iters;
        NmpcRuntime runtime(cfg, subject.params);
        (void)runtime.command(pushed);
        const double cost = runtime.predicted_cost(pushed);
        if (!first) CHECK(cost <= prev_cost + 1e-12);
        prev_cost = cost;
        first = false;
    }
}

TEST_CASE("nmpc config validation") {
    NmpcConfig bad;
    bad.iterations = 0;
    CHECK_THROWS_AS(NmpcRuntime(bad, default_subject().params), InputError);
}

TEST_CASE("stabilization envelopes are strictly inside (0, 0.9) and pairwise distinct") {
    const PendulumSubject subject = default_subject();
    const double pid = stabilization_envelope(subject, PidGains{}, 1e-3);
    const double lqr = stabilization_envelope(subject, LqrWeights{}, 1e-3);
    const double nmpc = stabilization_envelope(subject, NmpcConfig{}, 1e-3);

    for (double env : {pid, lqr, nmpc}) {
        CHECK(env > 0.0);
        CHECK(env < 0.9);
    }
    // distinct by more than the ground-truth grid resolution (0.002)
    CHECK(std::abs(pid - lqr) > 0.002);
    CHECK(std::abs(pid - nmpc) > 0.002);
    CHECK(std::abs(lqr - nmpc) > 0.002);
}

TEST_CASE("each controller stabilizes v=0 and fails at |v| = 0.9") {
    const PendulumSubject subject = default_subject();
    for (const ControllerSpec& spec :
         {ControllerSpec{PidGains{}}, ControllerSpec{LqrWeights{}}, ControllerSpec{NmpcConfig{}}}) {
        CHECK_FALSE(simulate_outcome(subject, spec, 0.0).failed);
        CHECK(simulate_outcome(subject, spec, 0.9).failed);
        CHECK(simulate_outcome(subject, spec, -0.9).failed);
    }
}

TEST_CASE("failure sets over a coarse grid differ pairwise") {
    const PendulumSubject subject = default_subject();
    TruncatedNormal1D p(0.0, 0.5, -0.9, 0.9);
    const auto bitmap = [&](const ControllerSpec& spec) {
        return enumerate_risk(make_failure_predicate(subject, spec), p, 0.02, 1).failure_set;
    };
    const auto pid = bitmap(PidGains{});
    const auto lqr = bitmap(LqrWeights{});
    const auto nmpc = bitmap(NmpcConfig{});
    CHECK(pid != lqr);
    CHECK(pid != nmpc);
    CHECK(lqr != nmpc);
}

TEST_CASE("zero disturbance leaves every closed loop at equilibrium") {
    const PendulumSubject subject = default_subject();
    for (const ControllerSpec& spec :
         {ControllerSpec{PidGains{}}, ControllerSpec{LqrWeights{}}, ControllerSpec{NmpcConfig{}}}) {
        const Trajectory t = simulate(subject, spec, 0.0);
        CHECK_FALSE(trajectory_failure(t, subject.params));
        for (const auto& s : t.states) {
            CHECK(s.theta == 0.0);
            CHECK(s.theta_dot == 0.0);
        }
    }
}

TEST_CASE("simulate is deterministic and matches the allocation-free path") {
    const PendulumSubject subject = default_subject();
    const ControllerSpec spec = PidGains{};
    for (double v : {0.05, 0.21, 0.31, -0.44, 0.88}) {
        const Trajectory a = simulate(subject, spec, v);
        const Trajectory b = simulate(subject, spec, v);
        REQUIRE(a.states.size() == b.states.size());
        for (std::size_t i = 0; i < a.states.size(); ++i) {
            CHECK(a.states[i].theta == b.states[i].theta);
            CHECK(a.states[i].theta_dot == b.states[i].theta_dot);
            CHECK(a.states[i].torque == b.states[i].torque);
        }
        const SimulationOutcome fast = simulate_outcome(subject, spec, v);
        CHECK(fast.failed == trajectory_failure(a, subject.params));
        CHECK(fast.steps + 1 == static_cast<int>(a.states.size()));
    }
}

TEST_CASE("trajectories honor the time base, actuation limits, and length cap") {
    const PendulumSubject subject = default_subject();
    const PendulumParams& p = subject.params;
    for (const ControllerSpec& spec :
         {ControllerSpec{PidGains{}}, ControllerSpec{LqrWeights{}}, ControllerSpec{NmpcConfig{}}}) {
        const Trajectory t = simulate(subject, spec, 0.27);
        REQUIRE(!t.states.empty());
        CHECK(t.states.size() <= static_cast<std::size_t>(p.max_steps()) + 1);
        CHECK(t.states.front().theta == 0.0);
        CHECK(t.states.front().theta_dot == doctest::Approx(0.27 / p.length));
        for (std::size_t i = 1; i < t.states.size(); ++i) {
            CHECK(t.states[i].time - t.states[i - 1].time == doctest::Approx(p.dt));
            CHECK(std::abs(t.states[i].torque) <= p.torque_limit + 1e-15);
            CHECK(std::abs(t.states[i].torque - t.states[i - 1].torque) <=
                  p.torque_rate_limit * p.dt + 1e-12);
        }
    }
}

TEST_CASE("disturbances outside the sample space are rejected") {
    const PendulumSubject subject = default_subject();
    CHECK_THROWS_AS(simulate_outcome(subject, PidGains{}, 0.95), InputError);
    CHECK_THROWS_AS(simulate(subject, PidGains{}, -1.2), InputError);
}

TEST_CASE("categorical subject failure lookup") {
    CategoricalSubject s;
    s.failure_labels = {0, 0, 1};
    CHECK(categorical_failure(s, 2.0) == 1);
    CHECK(categorical_failure(s, 0.0) == 0);
    CHECK_THROWS_AS(categorical_failure(s, 3.0), InputError);

    CategoricalSubject all_zero;
    all_zero.failure_labels = {0, 0};
    CHECK(categorical_failure(all_zero, 0.0) == 0);
    CHECK(categorical_failure(all_zero, 1.0) == 0);

    CategoricalSubject head;
    head.failure_labels = {1, 0};
    CHECK(categorical_failure(head, 0.0) == 1);

    Categorical law({0.2, 0.8});
    CHECK_THROWS_AS(s.validate_against(law), InputError);
}
