#include "glider/sim/metrics.hpp"

#include "glider/errors.hpp"

#include <cmath>

namespace glider {

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::kPitch: return "pitch";
    case Channel::kDepth: return "depth";
    case Channel::kRoll: return "roll";
  }
  return "?";
}

double channel_value(const TrajectorySample& s, Channel c) {
  switch (c) {
    case Channel::kPitch: return s.state.angles.theta;
    case Channel::kDepth: return s.state.pose.z;
    case Channel::kRoll: return s.state.angles.phi;
  }
  return 0.0;
}

double channel_reference(const TrajectorySample& s, Channel c) {
  switch (c) {
    case Channel::kPitch: return s.refs.theta;
    case Channel::kDepth: return s.refs.z;
    case Channel::kRoll: return s.refs.phi;
  }
  return 0.0;
}

TrackingMetrics compute_metrics(const Trajectory& traj, Channel channel, double target,
                                double window_fraction) {
  if (traj.samples.empty()) throw ValidationError("compute_metrics: empty trajectory");
  if (!(window_fraction > 0 && window_fraction <= 1))
    throw ValidationError("compute_metrics: window fraction must be in (0, 1]");
  const double t0 = traj.samples.front().t;
  const double t1 = traj.samples.back().t;
  const double t_start = t1 - window_fraction * (t1 - t0);

  TrackingMetrics m;
  double sum_sq = 0, sum_abs = 0;
  for (const auto& s : traj.samples) {
    if (s.t < t_start) continue;
    const double ref = channel_reference(s, channel);
    if (std::isnan(ref))
      throw ValidationError("compute_metrics: channel " + std::string(to_string(channel)) +
                            " has no reference");
    const double e = channel_value(s, channel) - ref;
    sum_sq += e * e;
    sum_abs += std::abs(e);
    ++m.samples;
  }
  const auto n = static_cast<double>(m.samples);
  m.rms_error = std::sqrt(sum_sq / n);
  m.mean_abs_error = sum_abs / n;
  const auto& last = traj.samples.back();
  m.final_error = channel_value(last, channel) - channel_reference(last, channel);
  if (std::abs(target) < 1e-12) {
    m.percent_error_of_target = m.mean_abs_error;
    m.percent_is_absolute = true;
  } else {
    m.percent_error_of_target = 100.0 * m.mean_abs_error / std::abs(target);
  }
  return m;
}

}  // namespace glider
