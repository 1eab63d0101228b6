#ifndef REPRISK_SUBJECTS_HPP
#define REPRISK_SUBJECTS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "reprisk/controllers.hpp"
#include "reprisk/distributions.hpp"
#include "reprisk/pendulum.hpp"

namespace reprisk {

// Push-over bench: the sampled test input is the initial tip velocity v_d
// (m/s), injected as theta_dot(0) = v_d / length.
struct PendulumSubject {
    PendulumParams params;
    double disturbance_lower = -0.9;
    double disturbance_upper = 0.9;

    void validate() const;
};

struct SimulationOutcome {
    bool failed = false;
    int steps = 0;
    PendulumState final_state;
};

// Closed loop (controller -> rate limit -> saturation -> RK4) for the full
// horizon or until the fail angle is crossed. Deterministic in (v_d, spec).
// A controller that produces a non-finite command scores as a failure.
SimulationOutcome simulate_outcome(const PendulumSubject& subject,
                                   const ControllerSpec& controller, double v_d);

// Same closed loop with the full state trajectory recorded.
Trajectory simulate(const PendulumSubject& subject, const ControllerSpec& controller,
                    double v_d);

// Largest |v_d| from which the controller recovers, located by bisection on
// the magnitude at the given tolerance. Assumes one-sided monotone failure.
double stabilization_envelope(const PendulumSubject& subject,
                              const ControllerSpec& controller, double tolerance);

// Synthetic subject with a known failure label per categorical outcome;
// paired with a Categorical law it has an exactly computable risk.
struct CategoricalSubject {
    std::vector<std::uint8_t> failure_labels;

    void validate_against(const Categorical& law) const;
};

// Failure label lookup; x is the outcome index embedded as a real.
int categorical_failure(const CategoricalSubject& subject, SamplePoint x);

// Failure check as a plain predicate over the sample space; the estimator
// and enumeration layers consume subjects in this shape.
using FailurePredicate = std::function<bool(SamplePoint)>;

FailurePredicate make_failure_predicate(const PendulumSubject& subject,
                                        const ControllerSpec& controller);
FailurePredicate make_failure_predicate(const CategoricalSubject& subject);

} // namespace reprisk

#endif
