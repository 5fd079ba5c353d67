#pragma once

#include "glider/control/nlc.hpp"

namespace glider {

/**
 * Second-order reference shaper ref = ω²/(s² + 2ζω s + ω²) · u_c, integrated
 * with RK4 under a held command. Exposes the reference and its first two
 * derivatives for feedforward.
 */
class ReferenceFilter {
 public:
  ReferenceFilter(double omega_n = 0.5, double zeta = 1.0);

  void reset(double value);
  /// Current (ref, ref_dot, ref_ddot) for command u_c, without advancing.
  ChannelTarget output(double u_c) const;
  /// Advances by dt with u_c held and returns the new output.
  ChannelTarget step(double u_c, double dt);

  double omega_n() const { return omega_n_; }
  double zeta() const { return zeta_; }

 private:
  double omega_n_;
  double zeta_;
  double ref_{0};
  double rate_{0};
};

}  // namespace glider
