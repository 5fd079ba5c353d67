#pragma once

/**
 * @file nlc.hpp
 * @brief Sliding-mode plus backstepping control of a channel ẍ = f + g·u.
 *
 * With e = x − x_d and s = k1 e + ė the composed input
 *
 *   u = (−k1 ė + ẍ_d − f − k3 s)/g − k2 sat(s/ε) sat(g/ε)
 *
 * gives V = s²/2 the derivative V̇ = −k3 s² − k2 |s||g| once |s|, |g| ≥ ε.
 */

#include "glider/control/linearization.hpp"
#include "glider/model/types.hpp"

#include <cmath>

namespace glider {

struct NlcGains {
  double k1{1.0};
  double k2{0.01};
  double k3{2.0};
  double epsilon{0.05};
};

inline double sliding_surface(double e, double e_dot, double k1) { return k1 * e + e_dot; }

/// Identity on [−1, 1], sign outside.
inline double saturation(double x) {
  if (std::abs(x) <= 1.0) return x;
  return x > 0 ? 1.0 : -1.0;
}

inline double smc_term(double s, double g, double k2, double epsilon) {
  return -k2 * saturation(s / epsilon) * saturation(g / epsilon);
}

/// Throws DegenerateGainError when |g| < g_min.
double backstepping_term(double e_dot, double x_ddot_d, double f, double g, double s, double k1,
                         double k3, double g_min = kDefaultGainFloor);

/// Smallest k2 for which the switching term dominates, |(k1 ė − ẍ_d + f)/g|.
double k2_lower_bound(double e_dot, double x_ddot_d, double f, double g, double k1,
                      double g_min = kDefaultGainFloor);

/// Total Lyapunov function of the depth and pitch channels.
inline double lyapunov_total(double s_depth, double s_pitch) {
  return 0.5 * (s_depth * s_depth + s_pitch * s_pitch);
}

/// Desired trajectory of one channel: value and two derivatives.
struct ChannelTarget {
  double x{0};
  double x_dot{0};
  double x_ddot{0};
};

/// Everything computed on one NLC evaluation, for logging and audits.
struct NlcResult {
  double command{0};    // after clamping
  double unclamped{0};
  double e{0}, e_dot{0}, s{0};
  LinearizedChannel lin;
  double u_smc{0}, u_bsc{0};
  double k2_bound{0};
};

/// Ballast command m_b tracking a depth trajectory; clamped to ±m_b_max.
NlcResult depth_control(const VehicleState<double>& state, const ActuatorState<double>& act,
                        const VehicleParams<double>& params, const ChannelTarget& target,
                        const NlcGains& gains);

/// Sliding-mass command Δr_s tracking a pitch trajectory; clamped to ±Δr_s_max.
NlcResult pitch_control(const VehicleState<double>& state, const ActuatorState<double>& act,
                        const VehicleParams<double>& params, const ChannelTarget& target,
                        const NlcGains& gains);

/**
 * Feedforward/PD roll law γ = φ_d + kp e + kd ė with e = φ_d − φ. The roll
 * error takes the opposite sign to the NLC channels.
 */
double roll_control(double phi_d, double phi_d_dot, double phi, double phi_dot, double kp,
                    double kd, double gamma_max);

}  // namespace glider
