#pragma once

#include "glider/sim/simulate.hpp"

#include <string_view>

namespace glider {

enum class Channel { kPitch, kDepth, kRoll };

std::string_view to_string(Channel c);

/// Tracking statistics of one channel over the post-transient window.
struct TrackingMetrics {
  double rms_error{0};
  double mean_abs_error{0};
  double final_error{0};  // signed, y − ref at the last sample
  /// mean |y − ref| / |target| in percent, or the absolute mean error when
  /// the target is zero (see percent_is_absolute).
  double percent_error_of_target{0};
  bool percent_is_absolute{false};
  std::size_t samples{0};
};

/**
 * Errors are taken against the logged reference of the channel over the last
 * `window_fraction` of the run. Throws ValidationError for an empty trajectory
 * or a channel without references.
 */
TrackingMetrics compute_metrics(const Trajectory& traj, Channel channel, double target,
                                double window_fraction = 0.5);

/// Measured value and logged reference of a channel in one sample.
double channel_value(const TrajectorySample& s, Channel c);
double channel_reference(const TrajectorySample& s, Channel c);

}  // namespace glider
