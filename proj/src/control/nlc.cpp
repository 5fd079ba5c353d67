#include "glider/control/nlc.hpp"

#include "glider/errors.hpp"

#include <algorithm>
#include <string>

namespace glider {

namespace {
void require_gain(double g, double g_min) {
  if (!(std::abs(g) >= g_min))
    throw DegenerateGainError("input gain |g| = " + std::to_string(std::abs(g)) + " below floor");
}

NlcResult compose(const LinearizedChannel& lin, double x, double x_dot, const ChannelTarget& t,
                  const NlcGains& k, double limit) {
  NlcResult r;
  r.lin = lin;
  r.e = x - t.x;
  r.e_dot = x_dot - t.x_dot;
  r.s = sliding_surface(r.e, r.e_dot, k.k1);
  r.u_bsc = backstepping_term(r.e_dot, t.x_ddot, lin.f, lin.g, r.s, k.k1, k.k3);
  r.u_smc = smc_term(r.s, lin.g, k.k2, k.epsilon);
  r.k2_bound = k2_lower_bound(r.e_dot, t.x_ddot, lin.f, lin.g, k.k1);
  r.unclamped = r.u_bsc + r.u_smc;
  r.command = std::clamp(r.unclamped, -limit, limit);
  return r;
}
}  // namespace

double backstepping_term(double e_dot, double x_ddot_d, double f, double g, double s, double k1,
                         double k3, double g_min) {
  require_gain(g, g_min);
  return (-k1 * e_dot + x_ddot_d - f - k3 * s) / g;
}

double k2_lower_bound(double e_dot, double x_ddot_d, double f, double g, double k1, double g_min) {
  require_gain(g, g_min);
  return std::abs((k1 * e_dot - x_ddot_d + f) / g);
}

NlcResult depth_control(const VehicleState<double>& state, const ActuatorState<double>& act,
                        const VehicleParams<double>& params, const ChannelTarget& target,
                        const NlcGains& gains) {
  return compose(depth_linearization(state, act, params), state.pose.z, depth_rate(state), target,
                 gains, params.limits.m_b_max);
}

NlcResult pitch_control(const VehicleState<double>& state, const ActuatorState<double>& act,
                        const VehicleParams<double>& params, const ChannelTarget& target,
                        const NlcGains& gains) {
  return compose(pitch_linearization(state, act, params), state.angles.theta, pitch_rate(state),
                 target, gains, params.limits.delta_rs_max);
}

double roll_control(double phi_d, double phi_d_dot, double phi, double phi_dot, double kp,
                    double kd, double gamma_max) {
  const double e = phi_d - phi;
  const double e_dot = phi_d_dot - phi_dot;
  return std::clamp(phi_d + kp * e + kd * e_dot, -gamma_max, gamma_max);
}

}  // namespace glider
