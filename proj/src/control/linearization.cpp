#include "glider/control/linearization.hpp"

#include "glider/errors.hpp"
#include "glider/model/dynamics.hpp"
#include "glider/model/kinematics.hpp"

#include <cmath>

namespace glider {

double pitch_rate(const VehicleState<double>& s) {
  return std::cos(s.angles.phi) * s.nu.q - std::sin(s.angles.phi) * s.nu.r;
}

double roll_rate(const VehicleState<double>& s) {
  return euler_rates_from_body_rates(s.angles, s.nu.angular())(0);
}

double depth_rate(const VehicleState<double>& s) {
  return gravity_direction_body(s.angles).dot(s.nu.linear());
}

LinearizedChannel pitch_linearization(const VehicleState<double>& state,
                                      const ActuatorState<double>& act,
                                      const VehicleParams<double>& params, double g_min) {
  const double cf = std::cos(state.angles.phi), sf = std::sin(state.angles.phi);
  const auto& nu = state.nu;
  const double phi_dot = euler_rates_from_body_rates(state.angles, nu.angular())(0);
  const double a_term = -(nu.q * sf + nu.r * cf) * phi_dot;

  // Δr_s moves the sliding mass along body x: torque m_s g Δr_s (e_x × k).
  const Vec3<double> k = gravity_direction_body(state.angles);
  Vec6<double> per_unit = Vec6<double>::Zero();
  per_unit.tail<3>() = params.mass.m_s * params.mass.g * Vec3<double>(0.0, -k.z(), k.y());
  const Vec6<double> dnu = params.inertia.M_inv() * per_unit;
  const double c = cf * dnu(4) - sf * dnu(5);
  if (!(std::abs(c) >= g_min)) {
    throw DegenerateGainError("pitch input gain |C| = " + std::to_string(std::abs(c)) +
                              " below floor");
  }
  const Vec6<double> nu_dot = body_acceleration(state, act, params);
  const double theta_ddot = cf * nu_dot(4) - sf * nu_dot(5) + a_term;
  return {theta_ddot - c * act.delta_rs, c};
}

LinearizedChannel depth_linearization(const VehicleState<double>& state,
                                      const ActuatorState<double>& act,
                                      const VehicleParams<double>& params) {
  const Vec3<double> k = gravity_direction_body(state.angles);
  const Vec3<double> lin = state.nu.linear();
  const Vec3<double> k_dot = k.cross(state.nu.angular());
  const double g = params.mass.g * k.dot(params.inertia.M_inv().topLeftCorner<3, 3>() * k);
  const Vec6<double> nu_dot = body_acceleration(state, act, params);
  const double z_ddot = k_dot.dot(lin) + k.dot(nu_dot.head<3>());
  return {z_ddot - g * act.m_b, g};
}

}  // namespace glider
