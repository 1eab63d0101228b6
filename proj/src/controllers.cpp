#include "reprisk/controllers.hpp"

#include <algorithm>
#include <cmath>

#include "reprisk/errors.hpp"

namespace reprisk {

std::string controller_kind(const ControllerSpec& spec) {
    switch (spec.index()) {
        case 0: return "pid";
        case 1: return "lqr";
        default: return "nmpc";
    }
}

Riccati2x2 solve_riccati_upright(const LqrWeights& weights, const PendulumParams& params) {
    if (!(weights.r > 0.0 && weights.q_theta > 0.0 && weights.q_omega >= 0.0))
        throw InputError("LqrWeights: need r > 0, q_theta > 0, q_omega >= 0");
    // Linearized upright dynamics: z' = A z + B u with
    //   A = [[0, 1], [a, -c]],  B = [0, b]^T,
    //   a = g/l, c = friction/(m l^2), b = 1/(m l^2).
    const double inertia = params.mass * params.length * params.length;
    const double a = params.gravity / params.length;
    const double c = params.friction / inertia;
    const double b = 1.0 / inertia;
    const double s = b * b / weights.r;

    // The three scalar CARE equations decouple: p12 from the (1,1) entry,
    // p22 from the (2,2) entry, p11 from the off-diagonal. Positive roots
    // give the stabilizing solution.
    const double p12 = (a + std::sqrt(a * a + s * weights.q_theta)) / s;
    const double p22 = (-c + std::sqrt(c * c + s * (2.0 * p12 + weights.q_omega))) / s;
    const double p11 = c * p12 - a * p22 + s * p12 * p22;
    return {p11, p12, p22};
}

LqrGain lqr_gain(const LqrWeights& weights, const PendulumParams& params) {
    const Riccati2x2 p = solve_riccati_upright(weights, params);
    const double inertia = params.mass * params.length * params.length;
    const double b = 1.0 / inertia;
    return {b / weights.r * p.p12, b / weights.r * p.p22};
}

NmpcRuntime::NmpcRuntime(const NmpcConfig& config, const PendulumParams& params)
    : config_(config) {
    if (config.horizon_steps < 1 || config.iterations < 1 ||
        config.control_period_steps < 1 || !(config.dt > 0.0) ||
        !(config.step_size > 0.0) || !(config.r > 0.0))
        throw InputError("NmpcConfig: invalid solver parameters");
    const double inertia = params.mass * params.length * params.length;
    grav_ = params.gravity / params.length;
    damp_ = params.friction / inertia;
    drive_gain_ = 1.0 / inertia;
    torque_limit_ = params.torque_limit;

    const Riccati2x2 p = solve_riccati_upright(
        LqrWeights{config.q_theta, config.q_omega, config.r}, params);
    tp11_ = p.p11;
    tp12_ = p.p12;
    tp22_ = p.p22;

    const auto n = static_cast<std::size_t>(config.horizon_steps);
    inputs_.assign(n, 0.0);
    pred_theta_.assign(n + 1, 0.0);
    pred_omega_.assign(n + 1, 0.0);
    pred_sin_.assign(n + 1, 0.0);
    pred_cos_.assign(n + 1, 0.0);
}

double NmpcRuntime::predicted_cost(const PendulumState& state) const {
    const int n = config_.horizon_steps;
    const double h = config_.dt;
    double theta = state.theta;
    double omega = state.theta_dot;
    double cost = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = inputs_[static_cast<std::size_t>(k)];
        cost += h * (config_.q_theta * theta * theta + config_.q_omega * omega * omega +
                     config_.r * u * u);
        const double acc = grav_ * std::sin(theta) - damp_ * omega + drive_gain_ * u;
        theta += h * omega;
        omega += h * acc;
    }
    return cost + tp11_ * theta * theta + 2.0 * tp12_ * theta * omega +
           tp22_ * omega * omega;
}

void NmpcRuntime::solve(const PendulumState& state) {
    const int n = config_.horizon_steps;
    const double h = config_.dt;

    for (int iter = 0; iter < config_.iterations; ++iter) {
        // Forward rollout under explicit Euler; sin/cos cached for the
        // adjoint sweep.
        pred_theta_[0] = state.theta;
        pred_omega_[0] = state.theta_dot;
        for (int k = 0; k < n; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const double th = pred_theta_[ku];
            const double om = pred_omega_[ku];
            const double sn = std::sin(th);
            const double cs = std::cos(th);
            pred_sin_[ku] = sn;
            pred_cos_[ku] = cs;
            const double acc = grav_ * sn - damp_ * om + drive_gain_ * inputs_[ku];
            pred_theta_[ku + 1] = th + h * om;
            pred_omega_[ku + 1] = om + h * acc;
        }

        // Adjoint sweep of the discretized cost.
        const auto nu = static_cast<std::size_t>(n);
        double lam_th = 2.0 * (tp11_ * pred_theta_[nu] + tp12_ * pred_omega_[nu]);
        double lam_om = 2.0 * (tp12_ * pred_theta_[nu] + tp22_ * pred_omega_[nu]);
        for (int k = n - 1; k >= 0; --k) {
            const auto ku = static_cast<std::size_t>(k);
            const double grad_u = 2.0 * h * config_.r * inputs_[ku] +
                                  h * drive_gain_ * lam_om;
            const double next_lam_th = 2.0 * h * config_.q_theta * pred_theta_[ku] +
                                       lam_th + h * grav_ * pred_cos_[ku] * lam_om;
            const double next_lam_om = 2.0 * h * config_.q_omega * pred_omega_[ku] +
                                       h * lam_th + (1.0 - h * damp_) * lam_om;
            lam_th = next_lam_th;
            lam_om = next_lam_om;
            inputs_[ku] = std::clamp(inputs_[ku] - config_.step_size * grad_u,
                                     -torque_limit_, torque_limit_);
            if (!std::isfinite(inputs_[ku]))
                throw ControllerError("nmpc: non-finite solver iterate");
        }
    }
}

double NmpcRuntime::command(const PendulumState& state) {
    if (!solved_once_ || steps_since_solve_ >= config_.control_period_steps) {
        if (solved_once_) {
            // Warm start: shift the plan by the elapsed control period and
            // pad with the final planned input.
            const int shift = std::min(config_.control_period_steps,
                                       config_.horizon_steps);
            const auto su = static_cast<std::ptrdiff_t>(shift);
            const double pad = inputs_.back();
            std::copy(inputs_.begin() + su, inputs_.end(), inputs_.begin());
            std::fill(inputs_.end() - su, inputs_.end(), pad);
        }
        solve(state);
        solved_once_ = true;
        steps_since_solve_ = 0;
    }
    ++steps_since_solve_;
    return inputs_[0];
}

ControllerRuntime::ControllerRuntime(const ControllerSpec& spec, const PendulumParams& params)
    : impl_(std::visit(
          [&](const auto& s) -> std::variant<PidRuntime, LqrRuntime, NmpcRuntime> {
              using T = std::decay_t<decltype(s)>;
              if constexpr (std::is_same_v<T, PidGains>) return PidRuntime(s, params);
              else if constexpr (std::is_same_v<T, LqrWeights>) return LqrRuntime(s, params);
              else return NmpcRuntime(s, params);
          },
          spec)) {}

double ControllerRuntime::command(const PendulumState& state) {
    return std::visit([&](auto& impl) { return impl.command(state); }, impl_);
}

} // namespace reprisk
