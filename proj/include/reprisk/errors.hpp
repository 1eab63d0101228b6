#ifndef REPRISK_ERRORS_HPP
#define REPRISK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace reprisk {

// Invalid user-facing input: malformed config, out-of-range argument,
// dimension mismatch. CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// p places mass where q has none; importance weights would be unbounded.
class AbsoluteContinuityError : public std::runtime_error {
public:
    explicit AbsoluteContinuityError(const std::string& what) : std::runtime_error(what) {}
};

// The budget search cannot satisfy the feasibility inequality within the
// scan limit, or the resulting budget is not representable. Exit code 3.
class PlannerDivergedError : public std::runtime_error {
public:
    explicit PlannerDivergedError(const std::string& what) : std::runtime_error(what) {}
};

// A sequential estimator hit its sample cap before its stopping rule
// was satisfied. Exit code 4.
class BudgetExhaustedError : public std::runtime_error {
public:
    explicit BudgetExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown inside a closed-loop simulation.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// A controller produced a non-finite command. The surrounding simulation
// scores the trajectory as a failure.
class ControllerError : public std::runtime_error {
public:
    explicit ControllerError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace reprisk

#endif
