#pragma once

/**
 * @file kinematics.hpp
 * @brief Frame rotations, flow incidence angles and the Euler-rate map.
 */

#include "glider/errors.hpp"
#include "glider/model/types.hpp"

#include <cmath>

namespace glider {

/// Default distance from θ = ±π/2 at which the Euler-rate map is refused.
inline constexpr double kGimbalMargin = 1e-3;

/**
 * Rotation for the yaw-pitch-roll sequence. Its columns are the body axes
 * expressed in the global frame, so R·v_body gives global components and
 * Rᵀ·k̂ gives the global down-vector in body components.
 */
template <typename Scalar>
Mat3<Scalar> rotation_inertial_to_body(const EulerAngles<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar cf = cos(a.phi), sf = sin(a.phi);
  const Scalar ct = cos(a.theta), st = sin(a.theta);
  const Scalar cp = cos(a.psi), sp = sin(a.psi);
  Mat3<Scalar> r;
  r << ct * cp, sf * st * cp - cf * sp, cf * st * cp + sf * sp,  //
      ct * sp, cf * cp + sf * st * sp, -sf * cp + cf * st * sp,   //
      -st, sf * ct, cf * ct;
  return r;
}

/// Global down-vector k̂ in body components, (R_ib)ᵀ k̂.
template <typename Scalar>
Vec3<Scalar> gravity_direction_body(const EulerAngles<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar ct = cos(a.theta);
  return {-sin(a.theta), sin(a.phi) * ct, cos(a.phi) * ct};
}

template <typename Scalar = double> struct FlowAngles {
  Scalar alpha{0};
  Scalar beta{0};
  /// Set when the translational speed is exactly zero; both angles are 0 then.
  bool stagnant{false};
};

template <typename Scalar>
FlowAngles<Scalar> flow_angles(const BodyVelocity<Scalar>& nu) {
  using std::asin;
  using std::atan2;
  using std::sqrt;
  const Scalar speed = sqrt(nu.u * nu.u + nu.v * nu.v + nu.w * nu.w);
  if (speed == Scalar(0)) return {Scalar(0), Scalar(0), true};
  Scalar ratio = nu.v / speed;
  if (ratio > Scalar(1)) ratio = Scalar(1);
  if (ratio < Scalar(-1)) ratio = Scalar(-1);
  return {atan2(nu.w, nu.u), asin(ratio), false};
}

template <typename Scalar>
Mat3<Scalar> rotation_flow_to_body(Scalar alpha, Scalar beta) {
  using std::cos;
  using std::sin;
  const Scalar ca = cos(alpha), sa = sin(alpha);
  const Scalar cb = cos(beta), sb = sin(beta);
  Mat3<Scalar> r;
  r << ca * cb, -ca * sb, -sa,  //
      sb, cb, Scalar(0),          //
      sa * cb, -sa * sb, ca;
  return r;
}

namespace detail {
template <typename Scalar>
void check_gimbal(const EulerAngles<Scalar>& a, double margin) {
  using std::abs;
  constexpr double kHalfPi = 1.5707963267948966;
  if (!(abs(static_cast<double>(a.theta)) < kHalfPi - margin)) {
    throw GimbalLockError(static_cast<double>(a.theta));
  }
}
}  // namespace detail

/// (φ̇, θ̇, ψ̇) from body rates (p, q, r).
template <typename Scalar>
Vec3<Scalar> euler_rates_from_body_rates(const EulerAngles<Scalar>& a, const Vec3<Scalar>& pqr,
                                         double gimbal_margin = kGimbalMargin) {
  using std::cos;
  using std::sin;
  detail::check_gimbal(a, gimbal_margin);
  const Scalar cf = cos(a.phi), sf = sin(a.phi);
  const Scalar ct = cos(a.theta), tt = sin(a.theta) / ct;
  const Scalar p = pqr(0), q = pqr(1), r = pqr(2);
  return {p + sf * tt * q + cf * tt * r, cf * q - sf * r, (sf * q + cf * r) / ct};
}

/// Inverse of euler_rates_from_body_rates.
template <typename Scalar>
Vec3<Scalar> body_rates_from_euler_rates(const EulerAngles<Scalar>& a,
                                         const Vec3<Scalar>& euler_rates,
                                         double gimbal_margin = kGimbalMargin) {
  using std::cos;
  using std::sin;
  detail::check_gimbal(a, gimbal_margin);
  const Scalar cf = cos(a.phi), sf = sin(a.phi);
  const Scalar ct = cos(a.theta), st = sin(a.theta);
  const Scalar phi_dot = euler_rates(0), theta_dot = euler_rates(1), psi_dot = euler_rates(2);
  return {phi_dot - st * psi_dot, cf * theta_dot + sf * ct * psi_dot,
          -sf * theta_dot + cf * ct * psi_dot};
}

}  // namespace glider
