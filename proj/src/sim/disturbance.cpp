#include "glider/sim/disturbance.hpp"

#include "glider/errors.hpp"

#include <cmath>

namespace glider {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over the combined word
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vec6<double> sample_disturbance(Rng& rng, const DisturbanceSpec& spec) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec6<double> out;
  for (int i = 0; i < 6; ++i) {
    const double z = normal(rng);
    out(i) = spec.sigma(i) * z;
  }
  return out;
}

DisturbanceProcess::DisturbanceProcess(const DisturbanceSpec& spec, double dt, std::uint64_t seed)
    : spec_(spec), rng_(seed), silent_(spec.sigma.isZero(0.0)) {
  if (!(spec.rate_hz > 0)) throw ValidationError("disturbance rate_hz must be > 0");
  if ((spec.sigma.array() < 0).any()) throw ValidationError("disturbance sigma must be >= 0");
  const double steps = 1.0 / (spec.rate_hz * dt);
  hold_steps_ = std::llround(steps);
  if (hold_steps_ < 1 || std::abs(steps - static_cast<double>(hold_steps_)) > 1e-6 * steps) {
    throw ValidationError("disturbance period must be an integer multiple of dt");
  }
}

const Vec6<double>& DisturbanceProcess::at_step(std::int64_t k) {
  if (!silent_ && k % hold_steps_ == 0) current_ = sample_disturbance(rng_, spec_);
  return current_;
}

}  // namespace glider
