#pragma once

/**
 * @file hydrodynamics.hpp
 * @brief Drag, lift, side force and damping moments from the twelve K's.
 */

#include "glider/model/kinematics.hpp"
#include "glider/model/types.hpp"

namespace glider {

/**
 * Powers of α applied to the α-dependent coefficients. Drag is quadratic,
 * lift and the pitch moment are linear. Changing an entry here changes the
 * model everywhere, including the identification regressors.
 */
struct AlphaPowers {
  int drag;
  int lift;
  int pitch_moment;
};
inline constexpr AlphaPowers kAlphaPowers{2, 1, 1};

namespace detail {
template <typename Scalar> Scalar ipow(Scalar x, int n) {
  Scalar out(1);
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}
}  // namespace detail

/// Flow-frame loads before rotation into the body frame.
template <typename Scalar = double> struct FlowLoads {
  Scalar drag{0}, lift{0}, side{0};
  Scalar roll{0}, pitch{0}, yaw{0};
};

template <typename Scalar>
FlowLoads<Scalar> flow_loads(const BodyVelocity<Scalar>& nu, const HydroCoefficients<Scalar>& k,
                             const FlowAngles<Scalar>& fa) {
  const Scalar v2 = nu.u * nu.u + nu.v * nu.v + nu.w * nu.w;
  const Scalar a = fa.alpha, b = fa.beta;
  FlowLoads<Scalar> out;
  out.drag = (k.kd0 + k.kd * detail::ipow(a, kAlphaPowers.drag)) * v2;
  out.lift = (k.kl0 + k.kl * detail::ipow(a, kAlphaPowers.lift)) * v2;
  out.side = k.kbeta * b * v2;
  out.roll = (k.kmr * b + k.kp * nu.p) * v2;
  out.pitch = (k.km0 + k.km * detail::ipow(a, kAlphaPowers.pitch_moment) + k.kq * nu.q) * v2;
  out.yaw = (k.kmy * b + k.kr * nu.r) * v2;
  return out;
}

/// Body-frame hydrodynamic force and torque.
template <typename Scalar>
Wrench<Scalar> hydrodynamic_wrench(const BodyVelocity<Scalar>& nu,
                                   const HydroCoefficients<Scalar>& k) {
  const FlowAngles<Scalar> fa = flow_angles(nu);
  const FlowLoads<Scalar> l = flow_loads(nu, k, fa);
  const Mat3<Scalar> r_bf = rotation_flow_to_body(fa.alpha, fa.beta);
  Wrench<Scalar> w;
  w.force = r_bf * Vec3<Scalar>(-l.drag, l.side, -l.lift);
  w.torque = r_bf * Vec3<Scalar>(l.roll, l.pitch, l.yaw);
  return w;
}

/**
 * Columns are the body wrench produced by each coefficient at unit value.
 * The wrench is linear in the coefficients, so hydrodynamic_wrench equals
 * this matrix times HydroCoefficients::vector().
 */
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 12> hydrodynamic_regressor(const BodyVelocity<Scalar>& nu) {
  Eigen::Matrix<Scalar, 6, 12> out;
  Eigen::Matrix<Scalar, 12, 1> unit = Eigen::Matrix<Scalar, 12, 1>::Zero();
  for (int j = 0; j < 12; ++j) {
    unit.setZero();
    unit(j) = Scalar(1);
    out.col(j) = hydrodynamic_wrench(nu, HydroCoefficients<Scalar>::from_vector(unit)).vector();
  }
  return out;
}

}  // namespace glider
