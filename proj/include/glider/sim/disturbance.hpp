#pragma once

#include "glider/model/types.hpp"

#include <cstdint>
#include <random>

namespace glider {

/// White-noise acceleration disturbance, redrawn at rate_hz and held between draws.
struct DisturbanceSpec {
  Vec6<double> sigma{Vec6<double>::Zero()};  // per-axis std, m/s² and rad/s²
  double rate_hz{10.0};
};

using Rng = std::mt19937_64;

/// Independent seed for run `index` of a family sharing `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// One draw of N(0, diag(σ²)).
Vec6<double> sample_disturbance(Rng& rng, const DisturbanceSpec& spec);

/**
 * Zero-order-held disturbance on the plant clock. The value for plant step k
 * is redrawn whenever k is a multiple of the hold length.
 */
class DisturbanceProcess {
 public:
  DisturbanceProcess(const DisturbanceSpec& spec, double dt, std::uint64_t seed);

  const Vec6<double>& at_step(std::int64_t k);
  std::int64_t hold_steps() const { return hold_steps_; }

 private:
  DisturbanceSpec spec_;
  Rng rng_;
  std::int64_t hold_steps_;
  bool silent_;
  Vec6<double> current_{Vec6<double>::Zero()};
};

}  // namespace glider
