#ifndef REPRISK_PENDULUM_HPP
#define REPRISK_PENDULUM_HPP

#include <vector>

namespace reprisk {

// Inverted pendulum bench: a 1 m rod with all mass at the tip, actuated at
// the pivot, torque-limited and rate-limited. theta = 0 is upright.
struct PendulumParams {
    double length = 1.0;     // m
    double mass = 1.0;       // kg
    double friction = 0.5;   // N*m*s/rad, viscous at the pivot
    double gravity = 9.817;  // m/s^2
    double dt = 0.01;        // s
    double horizon = 10.0;   // s
    double fail_angle = 1.5707963267948966; // rad

    double torque_limit = 1.0;      // N*m
    double torque_rate_limit = 10.0; // N*m/s

    void validate() const;
    int max_steps() const;
};

// Ball around upright that counts as "recovered" at horizon end.
inline constexpr double kRecoveryAngle = 0.05;    // rad
inline constexpr double kRecoveryRate = 0.05;     // rad/s

struct PendulumState {
    double theta = 0.0;      // rad
    double theta_dot = 0.0;  // rad/s
    double torque = 0.0;     // N*m, actuated command after limits
    double time = 0.0;       // s
};

// Rate limit w.r.t. the previously actuated torque, then saturate.
double apply_torque_limits(double torque_cmd, double prev_torque,
                           const PendulumParams& params);

// One RK4 step of size params.dt under a raw controller command. The
// command is passed through the actuation limits first and held constant
// across the step. Throws SimulationError on non-finite states.
PendulumState pendulum_step(const PendulumState& state, const PendulumParams& params,
                            double torque_cmd);

struct Trajectory {
    std::vector<PendulumState> states;
};

// 1 iff any state exceeds the fail angle or the final state is outside the
// recovery ball.
bool trajectory_failure(const Trajectory& trajectory, const PendulumParams& params);

// Kinetic plus potential energy; potential is maximal upright.
double mechanical_energy(const PendulumState& state, const PendulumParams& params);

} // namespace reprisk

#endif
