#include "reprisk/pendulum.hpp"

#include <algorithm>
#include <cmath>

#include "reprisk/errors.hpp"

namespace reprisk {

void PendulumParams::validate() const {
    if (!(length > 0.0 && mass > 0.0 && friction > 0.0 && gravity > 0.0))
        throw InputError("PendulumParams: physical constants must be positive");
    if (!(dt > 0.0 && dt <= 0.01))
        throw InputError("PendulumParams: dt must lie in (0, 0.01]");
    if (!(horizon >= 5.0))
        throw InputError("PendulumParams: horizon must be at least 5 s");
    if (!(fail_angle > 0.0))
        throw InputError("PendulumParams: fail_angle must be positive");
    if (!(torque_limit > 0.0 && torque_rate_limit > 0.0))
        throw InputError("PendulumParams: torque limits must be positive");
}

int PendulumParams::max_steps() const {
    return static_cast<int>(std::llround(horizon / dt));
}

double apply_torque_limits(double torque_cmd, double prev_torque,
                           const PendulumParams& params) {
    const double max_delta = params.torque_rate_limit * params.dt;
    const double rate_limited = std::clamp(torque_cmd,
                                           prev_torque - max_delta,
                                           prev_torque + max_delta);
    return std::clamp(rate_limited, -params.torque_limit, params.torque_limit);
}

PendulumState pendulum_step(const PendulumState& state, const PendulumParams& params,
                            double torque_cmd) {
    const double torque = apply_torque_limits(torque_cmd, state.torque, params);

    const double inertia = params.mass * params.length * params.length;
    const double grav = params.gravity / params.length;
    const double damp = params.friction / inertia;
    const double drive = torque / inertia;
    const double h = params.dt;

    // theta'' = (g/l) sin(theta) - (b/(m l^2)) theta' + tau/(m l^2)
    const auto accel = [&](double th, double om) {
        return grav * std::sin(th) - damp * om + drive;
    };

    const double th0 = state.theta;
    const double om0 = state.theta_dot;

    const double k1t = om0;
    const double k1o = accel(th0, om0);
    const double k2t = om0 + 0.5 * h * k1o;
    const double k2o = accel(th0 + 0.5 * h * k1t, om0 + 0.5 * h * k1o);
    const double k3t = om0 + 0.5 * h * k2o;
    const double k3o = accel(th0 + 0.5 * h * k2t, om0 + 0.5 * h * k2o);
    const double k4t = om0 + h * k3o;
    const double k4o = accel(th0 + h * k3t, om0 + h * k3o);

    PendulumState next;
    next.theta = th0 + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    next.theta_dot = om0 + h / 6.0 * (k1o + 2.0 * k2o + 2.0 * k3o + k4o);
    next.torque = torque;
    next.time = state.time + h;

    if (!std::isfinite(next.theta) || !std::isfinite(next.theta_dot))
        throw SimulationError("pendulum_step: state diverged to non-finite values");
    return next;
}

bool trajectory_failure(const Trajectory& trajectory, const PendulumParams& params) {
    if (trajectory.states.empty())
        throw InputError("trajectory_failure: empty trajectory");
    for (const auto& s : trajectory.states)
        if (std::abs(s.theta) > params.fail_angle) return true;
    const auto& last = trajectory.states.back();
    return std::abs(last.theta) > kRecoveryAngle || std::abs(last.theta_dot) > kRecoveryRate;
}

double mechanical_energy(const PendulumState& state, const PendulumParams& params) {
    const double inertia = params.mass * params.length * params.length;
    return 0.5 * inertia * state.theta_dot * state.theta_dot +
           params.mass * params.gravity * params.length * std::cos(state.theta);
}

} // namespace reprisk
