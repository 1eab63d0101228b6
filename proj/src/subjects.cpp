#include "reprisk/subjects.hpp"

#include <cmath>

#include "reprisk/errors.hpp"

namespace reprisk {

void PendulumSubject::validate() const {
    params.validate();
    if (!(disturbance_lower < disturbance_upper))
        throw InputError("PendulumSubject: disturbance range is empty");
}

namespace {

PendulumState initial_state(const PendulumSubject& subject, double v_d) {
    if (v_d < subject.disturbance_lower || v_d > subject.disturbance_upper)
        throw InputError("simulate: disturbance outside the declared sample space");
    PendulumState s;
    s.theta_dot = v_d / subject.params.length;
    return s;
}

// Shared closed-loop core. Record == nullptr runs the allocation-free path.
SimulationOutcome run_closed_loop(const PendulumSubject& subject,
                                  const ControllerSpec& controller, double v_d,
                                  Trajectory* record) {
    const PendulumParams& params = subject.params;
    ControllerRuntime runtime(controller, params);
    PendulumState state = initial_state(subject, v_d);

    const int max_steps = params.max_steps();
    if (record) {
        record->states.clear();
        record->states.reserve(static_cast<std::size_t>(max_steps) + 1);
        record->states.push_back(state);
    }

    SimulationOutcome outcome;
    for (int step = 0; step < max_steps; ++step) {
        double cmd = 0.0;
        try {
            cmd = runtime.command(state);
        } catch (const ControllerError&) {
            outcome.failed = true;
            outcome.steps = step;
            outcome.final_state = state;
            return outcome;
        }
        state = pendulum_step(state, params, cmd);
        if (record) record->states.push_back(state);
        outcome.steps = step + 1;
        if (std::abs(state.theta) > params.fail_angle) {
            outcome.failed = true;
            outcome.final_state = state;
            return outcome;
        }
    }
    outcome.final_state = state;
    outcome.failed = std::abs(state.theta) > kRecoveryAngle ||
                     std::abs(state.theta_dot) > kRecoveryRate;
    return outcome;
}

} // namespace

SimulationOutcome simulate_outcome(const PendulumSubject& subject,
                                   const ControllerSpec& controller, double v_d) {
    return run_closed_loop(subject, controller, v_d, nullptr);
}

Trajectory simulate(const PendulumSubject& subject, const ControllerSpec& controller,
                    double v_d) {
    Trajectory trajectory;
    run_closed_loop(subject, controller, v_d, &trajectory);
    return trajectory;
}

double stabilization_envelope(const PendulumSubject& subject,
                              const ControllerSpec& controller, double tolerance) {
    if (!(tolerance > 0.0)) throw InputError("stabilization_envelope: tolerance must be > 0");
    double lo = 0.0; // recovers
    double hi = subject.disturbance_upper;
    if (!simulate_outcome(subject, controller, hi).failed) return hi;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (simulate_outcome(subject, controller, mid).failed) hi = mid;
        else lo = mid;
    }
    return lo;
}

void CategoricalSubject::validate_against(const Categorical& law) const {
    if (failure_labels.size() != law.size())
        throw InputError("CategoricalSubject: label count does not match the paired law");
}

int categorical_failure(const CategoricalSubject& subject, SamplePoint x) {
    const auto idx = static_cast<long long>(std::llround(x));
    if (idx < 0 || idx >= static_cast<long long>(subject.failure_labels.size()))
        throw InputError("categorical_failure: index out of range");
    return subject.failure_labels[static_cast<std::size_t>(idx)] ? 1 : 0;
}

FailurePredicate make_failure_predicate(const PendulumSubject& subject,
                                        const ControllerSpec& controller) {
    return [subject, controller](SamplePoint v) {
        return simulate_outcome(subject, controller, v).failed;
    };
}

FailurePredicate make_failure_predicate(const CategoricalSubject& subject) {
    return [subject](SamplePoint x) { return categorical_failure(subject, x) != 0; };
}

} // namespace reprisk
