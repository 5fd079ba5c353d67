#pragma once

/**
 * @file integrator.hpp
 * @brief Classical fixed-step fourth-order Runge-Kutta.
 */

#include "glider/errors.hpp"
#include "glider/model/dynamics.hpp"

#include <string>

namespace glider {

/**
 * One RK4 step of x' = f(x) for any state type closed under `+` and scalar
 * `*`. f is called exactly four times.
 */
template <typename State, typename Deriv>
State rk4_step(const State& x, Deriv&& f, double dt) {
  const State k1 = f(x);
  const State k2 = f(State(x + (0.5 * dt) * k1));
  const State k3 = f(State(x + (0.5 * dt) * k2));
  const State k4 = f(State(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/**
 * Plant step with actuators and disturbance held over [t, t + dt].
 * Throws DivergenceError (stamped with t) on a non-finite result.
 */
inline VehicleState<double> rk4_step(const VehicleState<double>& state,
                                     const ActuatorState<double>& act,
                                     const VehicleParams<double>& params,
                                     const Vec6<double>& extra_accel, double dt, double t = 0.0) {
  auto f = [&](const Vec12<double>& x) -> Vec12<double> {
    return state_derivative(VehicleState<double>::from_vector(x), act, params, extra_accel)
        .vector();
  };
  Vec12<double> next;
  try {
    next = rk4_step(state.vector(), f, dt);
  } catch (const GimbalLockError& e) {
    throw DivergenceError(t, e.what());
  }
  if (!next.allFinite()) throw DivergenceError(t, "non-finite state derivative");
  return VehicleState<double>::from_vector(next);
}

}  // namespace glider
