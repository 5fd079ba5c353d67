#pragma once

/**
 * @file types.hpp
 * @brief Physical types of the glider model.
 *
 * Everything here is a plain value templated on the scalar type. Frames:
 * the inertial frame has z pointing down (depth), the body frame has x along
 * the hull axis, y to starboard and z toward the keel.
 */

#include "glider/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <string_view>

namespace glider {

template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Vec12 = Eigen::Matrix<Scalar, 12, 1>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Mat6 = Eigen::Matrix<Scalar, 6, 6>;

template <typename Scalar = double> struct EulerAngles {
  Scalar phi{0};    // roll (rad)
  Scalar theta{0};  // pitch (rad)
  Scalar psi{0};    // yaw (rad)
};

/// Body-frame velocity ν = [u, v, w, p, q, r].
template <typename Scalar = double> struct BodyVelocity {
  Scalar u{0}, v{0}, w{0};
  Scalar p{0}, q{0}, r{0};

  Vec3<Scalar> linear() const { return {u, v, w}; }
  Vec3<Scalar> angular() const { return {p, q, r}; }
  Vec6<Scalar> vector() const {
    Vec6<Scalar> out;
    out << u, v, w, p, q, r;
    return out;
  }
  static BodyVelocity from_vector(const Vec6<Scalar>& nu) {
    return {nu(0), nu(1), nu(2), nu(3), nu(4), nu(5)};
  }
};

/// Global-frame position; z is depth, positive down.
template <typename Scalar = double> struct InertialPose {
  Scalar x{0}, y{0}, z{0};

  Vec3<Scalar> vector() const { return {x, y, z}; }
};

template <typename Scalar = double> struct VehicleState {
  InertialPose<Scalar> pose;
  EulerAngles<Scalar> angles;
  BodyVelocity<Scalar> nu;

  /// Packed as [x y z φ θ ψ u v w p q r].
  Vec12<Scalar> vector() const {
    Vec12<Scalar> s;
    s << pose.x, pose.y, pose.z, angles.phi, angles.theta, angles.psi, nu.u, nu.v, nu.w, nu.p,
        nu.q, nu.r;
    return s;
  }
  static VehicleState from_vector(const Vec12<Scalar>& s) {
    VehicleState out;
    out.pose = {s(0), s(1), s(2)};
    out.angles = {s(3), s(4), s(5)};
    out.nu = {s(6), s(7), s(8), s(9), s(10), s(11)};
    return out;
  }
};

/**
 * The twelve hydrodynamic coefficients. Forces scale with V² and are in
 * N·s²/m²; the angle-dependent ones are per radian (or rad²).
 */
template <typename Scalar = double> struct HydroCoefficients {
  static constexpr std::size_t kCount = 12;

  Scalar kd0{0}, kd{0};      // parasitic and induced drag
  Scalar kl0{0}, kl{0};      // lift
  Scalar kbeta{0};           // side force
  Scalar kmr{0}, kp{0};      // roll moment: sideslip, roll damping
  Scalar km0{0}, km{0}, kq{0};  // pitch moment: offset, α, pitch damping
  Scalar kmy{0}, kr{0};      // yaw moment: sideslip, yaw damping

  /// Fixed parameter order used by every flattened representation.
  static constexpr std::array<std::string_view, kCount> kNames = {
      "kd0", "kd", "kl0", "kl", "kbeta", "kmr", "kp", "km0", "km", "kq", "kmy", "kr"};

  Eigen::Matrix<Scalar, 12, 1> vector() const {
    Eigen::Matrix<Scalar, 12, 1> out;
    out << kd0, kd, kl0, kl, kbeta, kmr, kp, km0, km, kq, kmy, kr;
    return out;
  }
  static HydroCoefficients from_vector(const Eigen::Matrix<Scalar, 12, 1>& k) {
    return {k(0), k(1), k(2), k(3), k(4), k(5), k(6), k(7), k(8), k(9), k(10), k(11)};
  }
};

/**
 * Masses and body-frame positions of the moving components.
 *
 * r_s is the sliding-mass position at zero rail displacement, so r_sx0 is its
 * x component. r_b is the ballast position with the plunger at rest. r_r is
 * the hub of the rotary mass, which sits at radius rotary_radius from the
 * hull axis and hangs toward +z at γ = 0.
 */
template <typename Scalar = double> struct MassConfiguration {
  Scalar m_total{13.0};
  Scalar m_r{1.0};
  Scalar m_s{2.0};
  Vec3<Scalar> r_r{Vec3<Scalar>::Zero()};
  Vec3<Scalar> r_s{Vec3<Scalar>::Zero()};
  Vec3<Scalar> r_b{Vec3<Scalar>::Zero()};
  Scalar rotary_radius{0.02};
  Scalar g{9.81};

  Scalar r_sx0() const { return r_s.x(); }
};

/**
 * Generalized inertia (rigid body plus added mass). The inverse is cached at
 * construction; construction fails for a matrix that is not SPD.
 */
template <typename Scalar = double> class InertiaModel {
 public:
  InertiaModel() : InertiaModel(Mat6<Scalar>::Identity()) {}
  explicit InertiaModel(const Mat6<Scalar>& m);

  const Mat6<Scalar>& M() const { return m_; }
  const Mat6<Scalar>& M_inv() const { return m_inv_; }
  Scalar Ixx() const { return m_(3, 3); }
  Scalar Iyy() const { return m_(4, 4); }
  Scalar Izz() const { return m_(5, 5); }

 private:
  Mat6<Scalar> m_;
  Mat6<Scalar> m_inv_;
};

template <typename Scalar>
InertiaModel<Scalar>::InertiaModel(const Mat6<Scalar>& m) : m_(m) {
  if (!m_.isApprox(m_.transpose())) throw SingularInertiaError("inertia matrix is not symmetric");
  Eigen::LLT<Mat6<Scalar>> llt(m_);
  if (llt.info() != Eigen::Success)
    throw SingularInertiaError("inertia matrix is not positive definite");
  m_inv_ = llt.solve(Mat6<Scalar>::Identity());
}

/// Actuator inputs. delta_rb is derived from m_b by the plunger map.
template <typename Scalar = double> struct ActuatorState {
  Scalar gamma{0};
  Scalar delta_rs{0};
  Scalar m_b{0};
  Scalar delta_rb{0};
};

/// Actuator travel limits, symmetric about zero.
struct ActuatorLimits {
  double gamma_max{1.0471975511965976};  // π/3
  double delta_rs_max{0.05};
  double m_b_max{0.25};
};

template <typename Scalar = double> struct Wrench {
  Vec3<Scalar> force{Vec3<Scalar>::Zero()};
  Vec3<Scalar> torque{Vec3<Scalar>::Zero()};

  Vec6<Scalar> vector() const {
    Vec6<Scalar> out;
    out << force, torque;
    return out;
  }
  Wrench& operator+=(const Wrench& other) {
    force += other.force;
    torque += other.torque;
    return *this;
  }
};

template <typename Scalar>
Wrench<Scalar> operator+(Wrench<Scalar> a, const Wrench<Scalar>& b) {
  a += b;
  return a;
}

/// Everything the plant needs besides state and inputs.
template <typename Scalar = double> struct VehicleParams {
  InertiaModel<Scalar> inertia;
  MassConfiguration<Scalar> mass;
  HydroCoefficients<Scalar> hydro;
  ActuatorLimits limits;
  /// Plunger travel per unit ballast mass, Δr_b = plunger_gain · m_b (m/kg).
  Scalar plunger_gain{0.2};
};

}  // namespace glider
