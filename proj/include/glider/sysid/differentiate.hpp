#pragma once

/**
 * @file differentiate.hpp
 * @brief Body-frame velocities and accelerations from recorded poses.
 */

#include "glider/model/kinematics.hpp"
#include "glider/model/types.hpp"
#include "glider/sysid/mocap.hpp"

#include <string>
#include <vector>

namespace glider {

struct DerivedSample {
  double t{0};
  VehicleState<double> state;  // smoothed pose and attitude, derived ν
  Vec6<double> nu_dot{Vec6<double>::Zero()};
  ActuatorState<double> act;
};

struct DerivedStateSeries {
  std::string run;
  std::vector<DerivedSample> samples;
  /// Samples discarded because the attitude was too close to θ = ±π/2.
  int gimbal_dropped{0};
};

struct DifferentiationOptions {
  /// Width of the centred moving average applied to the poses (odd, 1 = none).
  int smoothing_window{5};
  /// Largest allowed |Δt − mean Δt| / mean Δt.
  double max_jitter{0.05};
  double gimbal_margin{kGimbalMargin};
};

/**
 * Centred moving average, then three-point central differences (exact on
 * quadratics for any spacing). Velocities go to the body frame with R_ibᵀ and
 * the Euler-rate inverse; ν̇ is the central difference of the ν series. Yaw is
 * unwrapped first. smoothing_window/2 + 2 samples are trimmed at each end.
 *
 * On a sinusoid of frequency ω sampled at h, the first difference scales the
 * amplitude by sin(ωh)/(ωh) and a w-point average by sin(wωh/2)/(w sin(ωh/2)).
 */
DerivedStateSeries differentiate(const MocapRun& run, const VehicleParams<double>& params,
                                 const DifferentiationOptions& options = {});

/// Three-point derivative at the middle of (t0, f0), (t1, f1), (t2, f2).
double central_difference(double t0, double f0, double t1, double f1, double t2, double f2);

/// Removes 2π jumps between consecutive samples.
std::vector<double> unwrap_angles(const std::vector<double>& angles);

/// Centred moving average of odd width; the half-window at each end is copied unchanged.
std::vector<double> moving_average(const std::vector<double>& x, int window);

}  // namespace glider
