#pragma once

/**
 * @file synthetic.hpp
 * @brief Synthetic gliding-run corpus over the ballast × sliding-mass × servo grid.
 */

#include "glider/sysid/differentiate.hpp"
#include "glider/sysid/mocap.hpp"

#include <cstdint>
#include <vector>

namespace glider {

struct CorpusSpec {
  /// Fractions of the actuator maxima; one run per combination.
  std::vector<double> ballast_levels{1.0, 0.6, 0.2};
  std::vector<double> sliding_levels{1.0, 0.5, 0.1};
  std::vector<double> servo_levels{1.0, 0.8, 0.6, 0.4, 0.2};
  double duration{45.0};
  double sample_rate_hz{20.0};
  /// Each run dives for the first half and climbs for the second.
  bool dive_then_climb{true};
  /// Std of the initial body rates p, q, r (rad/s).
  double initial_rate_std{0.05};
  /// Std of the additive noise on the observed ν̇ (m/s², rad/s²).
  Vec6<double> accel_noise{Vec6<double>::Constant(0.02)};
  std::uint64_t seed{7};
};

struct SyntheticRun {
  /// Sampled poses and actuator schedule, as a recorder would store them.
  MocapRun mocap;
  /// True states with noisy accelerations, at the same instants.
  DerivedStateSeries series;
};

/// Simulates every grid cell with the plant `truth`; runs are named run_000, run_001, ...
std::vector<SyntheticRun> generate_corpus(const VehicleParams<double>& truth,
                                          const CorpusSpec& spec);

MocapDataset to_dataset(const std::vector<SyntheticRun>& corpus);
std::vector<DerivedStateSeries> to_series(const std::vector<SyntheticRun>& corpus);

}  // namespace glider
