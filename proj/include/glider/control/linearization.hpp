#pragma once

/**
 * @file linearization.hpp
 * @brief Input/output forms of the pitch and depth channels,
 *        θ̈ = B + C·Δr_s and Z̈ = E + G·m_b.
 *
 * Both are evaluated from the same right-hand side as state_derivative, so the
 * affine split is exact for any SPD inertia. For M = diag(m_t I, Ixx, Iyy, Izz)
 * they reduce to the closed forms
 *
 *   C = −m_s g cθ (c²φ/Iyy + s²φ/Izz)
 *   B = A + cφ/Iyy [(Izz − Ixx) p r + τ_y + T₂] − sφ/Izz [(Ixx − Iyy) p q + τ_z + T₃]
 *   G = g / m_t
 *
 * where A = −(q sφ + r cφ) φ̇ and τ is the moving-mass moment with Δr_s = 0.
 * The τ_z/T₃ bracket is the one the printed pitch form leaves incomplete.
 */

#include "glider/model/types.hpp"

namespace glider {

/// ẍ = f + g·u for one channel.
struct LinearizedChannel {
  double f{0};
  double g{0};
};

inline constexpr double kDefaultGainFloor = 1e-8;

/// Throws DegenerateGainError when |C| < g_min, GimbalLockError near θ = ±π/2.
LinearizedChannel pitch_linearization(const VehicleState<double>& state,
                                      const ActuatorState<double>& act,
                                      const VehicleParams<double>& params,
                                      double g_min = kDefaultGainFloor);

LinearizedChannel depth_linearization(const VehicleState<double>& state,
                                      const ActuatorState<double>& act,
                                      const VehicleParams<double>& params);

/// θ̇ = cφ q − sφ r.
double pitch_rate(const VehicleState<double>& state);
/// φ̇ from the Euler-rate map.
double roll_rate(const VehicleState<double>& state);
/// Ż = −u sθ + v sφ cθ + w cφ cθ.
double depth_rate(const VehicleState<double>& state);

}  // namespace glider
