#ifndef REPRISK_CONTROLLERS_HPP
#define REPRISK_CONTROLLERS_HPP

#include <string>
#include <variant>
#include <vector>

#include "reprisk/pendulum.hpp"

namespace reprisk {

struct PidGains {
    double kp = 10.5;
    double ki = 1.0;
    double kd = 2.2;
};

struct LqrWeights {
    double q_theta = 10.0;
    double q_omega = 1.0;
    double r = 1.0;
};

// Receding-horizon quadratic regulator solved by fixed-iteration projected
// gradient on the torque sequence. Deterministic by construction. The
// prediction window is kept short (1 s) so the unstable mode does not make
// the gradient steps diverge.
struct NmpcConfig {
    int horizon_steps = 40;        // prediction steps
    double dt = 0.015;             // prediction step, s
    int iterations = 30;           // projected-gradient iterations per solve
    double step_size = 0.02;       // gradient step
    int control_period_steps = 20; // plant steps between re-solves
    double q_theta = 10.0;
    double q_omega = 1.0;
    double r = 1.0;
};

using ControllerSpec = std::variant<PidGains, LqrWeights, NmpcConfig>;

std::string controller_kind(const ControllerSpec& spec);

// Solution of the 2-state continuous algebraic Riccati equation for the
// upright linearization; solved in closed form.
struct Riccati2x2 {
    double p11, p12, p22;
};

Riccati2x2 solve_riccati_upright(const LqrWeights& weights, const PendulumParams& params);

struct LqrGain {
    double k_theta;
    double k_omega;
};

LqrGain lqr_gain(const LqrWeights& weights, const PendulumParams& params);

class PidRuntime {
public:
    PidRuntime(const PidGains& gains, const PendulumParams& params)
        : gains_(gains), dt_(params.dt) {}

    double command(const PendulumState& state) {
        const double u = -(gains_.kp * state.theta + gains_.ki * integral_ +
                           gains_.kd * state.theta_dot);
        integral_ += state.theta * dt_;
        return u;
    }

private:
    PidGains gains_;
    double dt_;
    double integral_ = 0.0;
};

class LqrRuntime {
public:
    LqrRuntime(const LqrWeights& weights, const PendulumParams& params)
        : gain_(lqr_gain(weights, params)) {}

    double command(const PendulumState& state) const {
        return -(gain_.k_theta * state.theta + gain_.k_omega * state.theta_dot);
    }

private:
    LqrGain gain_;
};

class NmpcRuntime {
public:
    NmpcRuntime(const NmpcConfig& config, const PendulumParams& params);

    double command(const PendulumState& state);

    // Predicted cost of the current input sequence from `state`; exposed for
    // solver regression tests.
    double predicted_cost(const PendulumState& state) const;

private:
    void solve(const PendulumState& state);

    NmpcConfig config_;
    double grav_, damp_, drive_gain_;   // dynamics constants
    double tp11_, tp12_, tp22_;         // terminal weight
    double torque_limit_;
    std::vector<double> inputs_;
    std::vector<double> pred_theta_, pred_omega_, pred_sin_, pred_cos_;
    int steps_since_solve_ = 0;
    bool solved_once_ = false;
};

// Type-erased controller with per-simulation mutable state. Fresh instances
// are created per trajectory so concurrent simulations never share state.
class ControllerRuntime {
public:
    ControllerRuntime(const ControllerSpec& spec, const PendulumParams& params);

    // Raw torque command before actuation limits.
    double command(const PendulumState& state);

private:
    std::variant<PidRuntime, LqrRuntime, NmpcRuntime> impl_;
};

} // namespace reprisk

#endif
