#include "glider/control/reference_filter.hpp"

#include "glider/errors.hpp"
#include "glider/sim/integrator.hpp"

namespace glider {

ReferenceFilter::ReferenceFilter(double omega_n, double zeta) : omega_n_(omega_n), zeta_(zeta) {
  if (!(omega_n > 0) || !(zeta > 0))
    throw ValidationError("reference filter needs omega_n > 0 and zeta > 0");
}

void ReferenceFilter::reset(double value) {
  ref_ = value;
  rate_ = 0.0;
}

ChannelTarget ReferenceFilter::output(double u_c) const {
  const double w2 = omega_n_ * omega_n_;
  return {ref_, rate_, w2 * (u_c - ref_) - 2.0 * zeta_ * omega_n_ * rate_};
}

ChannelTarget ReferenceFilter::step(double u_c, double dt) {
  const double w2 = omega_n_ * omega_n_;
  const double c = 2.0 * zeta_ * omega_n_;
  auto f = [&](const Eigen::Vector2d& x) -> Eigen::Vector2d {
    return {x(1), w2 * (u_c - x(0)) - c * x(1)};
  };
  const Eigen::Vector2d next = rk4_step(Eigen::Vector2d(ref_, rate_), f, dt);
  ref_ = next(0);
  rate_ = next(1);
  return output(u_c);
}

}  // namespace glider
