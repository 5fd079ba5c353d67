#pragma once

/**
 * @file dynamics.hpp
 * @brief Rigid-body equations of motion of the internally actuated glider.
 *
 * ν̇ = M⁻¹ ( [P×Ω; Q×Ω + P×V] + W_gb + W_hydro ) + a_ext
 *
 * with [P; Q] = M ν, the net-buoyancy force m_b g Rᵀk̂ and the moment of the
 * moving masses (m_r r_r + m_s r_s + m_b r_b) g × Rᵀk̂. M is constant, so the
 * Ṁν term vanishes.
 */

#include "glider/model/hydrodynamics.hpp"
#include "glider/model/kinematics.hpp"
#include "glider/model/types.hpp"

#include <cmath>
#include <utility>

namespace glider {

/// Plunger displacement Δr_b for a ballast mass, linear in m_b.
template <typename Scalar>
Scalar plunger_displacement(const VehicleParams<Scalar>& params, Scalar m_b) {
  return params.plunger_gain * m_b;
}

/// Actuator state with Δr_b filled in from m_b.
template <typename Scalar>
ActuatorState<Scalar> make_actuators(const VehicleParams<Scalar>& params, Scalar gamma,
                                     Scalar delta_rs, Scalar m_b) {
  return {gamma, delta_rs, m_b, plunger_displacement(params, m_b)};
}

template <typename Scalar = double> struct MassPositions {
  Vec3<Scalar> r_r, r_s, r_b;
};

/**
 * Body-frame positions of the moving masses for the given actuator state:
 * the sliding mass moves along x from r_sx0, the ballast centroid moves with
 * the plunger along x, and the rotary mass turns by γ about the x axis.
 */
template <typename Scalar>
MassPositions<Scalar> mass_positions(const MassConfiguration<Scalar>& mass,
                                     const ActuatorState<Scalar>& act) {
  using std::cos;
  using std::sin;
  MassPositions<Scalar> out;
  out.r_r = mass.r_r + mass.rotary_radius * Vec3<Scalar>(Scalar(0), sin(act.gamma), cos(act.gamma));
  out.r_s = mass.r_s + Vec3<Scalar>(act.delta_rs, Scalar(0), Scalar(0));
  out.r_b = mass.r_b + Vec3<Scalar>(act.delta_rb, Scalar(0), Scalar(0));
  return out;
}

template <typename Scalar>
Wrench<Scalar> gravity_buoyancy_wrench(const EulerAngles<Scalar>& angles,
                                       const MassConfiguration<Scalar>& mass,
                                       const ActuatorState<Scalar>& act) {
  const Vec3<Scalar> weight_dir = mass.g * gravity_direction_body(angles);
  const MassPositions<Scalar> pos = mass_positions(mass, act);
  const Vec3<Scalar> first_moment = mass.m_r * pos.r_r + mass.m_s * pos.r_s + act.m_b * pos.r_b;
  Wrench<Scalar> w;
  w.force = act.m_b * weight_dir;
  w.torque = first_moment.cross(weight_dir);
  return w;
}

/// Translational and angular momentum [P; Q] = M ν.
template <typename Scalar>
std::pair<Vec3<Scalar>, Vec3<Scalar>> generalized_momentum(const InertiaModel<Scalar>& inertia,
                                                           const BodyVelocity<Scalar>& nu) {
  const Vec6<Scalar> h = inertia.M() * nu.vector();
  return {h.template head<3>(), h.template tail<3>()};
}

/// Gyroscopic and Coriolis terms [P×Ω; Q×Ω + P×V].
template <typename Scalar>
Vec6<Scalar> coriolis_wrench(const InertiaModel<Scalar>& inertia, const BodyVelocity<Scalar>& nu) {
  const auto [p, q] = generalized_momentum(inertia, nu);
  const Vec3<Scalar> lin = nu.linear(), ang = nu.angular();
  Vec6<Scalar> out;
  out << p.cross(ang), q.cross(ang) + p.cross(lin);
  return out;
}

/// Sum of every generalized force on the right-hand side, before M⁻¹.
template <typename Scalar>
Vec6<Scalar> generalized_forces(const VehicleState<Scalar>& state,
                                const ActuatorState<Scalar>& act,
                                const VehicleParams<Scalar>& params) {
  return coriolis_wrench(params.inertia, state.nu) +
         gravity_buoyancy_wrench(state.angles, params.mass, act).vector() +
         hydrodynamic_wrench(state.nu, params.hydro).vector();
}

/// Body-frame acceleration ν̇, without any external disturbance.
template <typename Scalar>
Vec6<Scalar> body_acceleration(const VehicleState<Scalar>& state, const ActuatorState<Scalar>& act,
                               const VehicleParams<Scalar>& params) {
  return params.inertia.M_inv() * generalized_forces(state, act, params);
}

/**
 * Time derivative of the full state. extra_accel is added to ν̇ and carries
 * the disturbance; pass zero for the nominal plant.
 */
template <typename Scalar>
VehicleState<Scalar> state_derivative(const VehicleState<Scalar>& state,
                                      const ActuatorState<Scalar>& act,
                                      const VehicleParams<Scalar>& params,
                                      const Vec6<Scalar>& extra_accel = Vec6<Scalar>::Zero(),
                                      double gimbal_margin = kGimbalMargin) {
  const Vec6<Scalar> nu_dot = body_acceleration(state, act, params) + extra_accel;
  const Vec3<Scalar> pos_dot = rotation_inertial_to_body(state.angles) * state.nu.linear();
  const Vec3<Scalar> ang_dot =
      euler_rates_from_body_rates(state.angles, state.nu.angular(), gimbal_margin);
  VehicleState<Scalar> d;
  d.pose = {pos_dot(0), pos_dot(1), pos_dot(2)};
  d.angles = {ang_dot(0), ang_dot(1), ang_dot(2)};
  d.nu = BodyVelocity<Scalar>::from_vector(nu_dot);
  return d;
}

}  // namespace glider
