#pragma once

namespace glider {

struct PidGains {
  double kp{0};
  double ki{0};
  double kd{0};
  /// |∫e dt| is clamped to this value.
  double integrator_limit{1e9};
  /// Time constant of the first-order filter on the derivative (0 = unfiltered).
  double derivative_tau{0};
};

struct PidState {
  double integral{0};
  double prev_error{0};
  double derivative{0};
  bool primed{false};
};

/**
 * Discrete PID: rectangular integration with clamping, backward-difference
 * derivative through a first-order filter. The first call has no derivative
 * kick.
 */
double pid_step(const PidGains& gains, double e, double dt, PidState& state);

/**
 * Primes the state so that the next pid_step(gains, e, dt) returns `u`
 * (bumpless hand-over from another controller). Without integral action only
 * the derivative history is reset.
 */
void pid_preload(const PidGains& gains, double e, double u, double dt, PidState& state);

}  // namespace glider
