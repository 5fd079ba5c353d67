#include "glider/control/pid.hpp"

#include <algorithm>

namespace glider {

double pid_step(const PidGains& gains, double e, double dt, PidState& state) {
  state.integral = std::clamp(state.integral + e * dt, -gains.integrator_limit,
                              gains.integrator_limit);
  if (state.primed) {
    const double raw = (e - state.prev_error) / dt;
    const double a = gains.derivative_tau > 0 ? dt / (gains.derivative_tau + dt) : 1.0;
    state.derivative += a * (raw - state.derivative);
  } else {
    state.derivative = 0.0;
    state.primed = true;
  }
  state.prev_error = e;
  return gains.kp * e + gains.ki * state.integral + gains.kd * state.derivative;
}

void pid_preload(const PidGains& gains, double e, double u, double dt, PidState& state) {
  state.prev_error = e;
  state.derivative = 0.0;
  state.primed = true;
  if (gains.ki == 0.0) return;
  state.integral = std::clamp((u - gains.kp * e) / gains.ki - e * dt, -gains.integrator_limit,
                              gains.integrator_limit);
}

}  // namespace glider
