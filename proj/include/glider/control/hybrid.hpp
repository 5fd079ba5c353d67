#pragma once

#include "glider/control/command.hpp"

#include <cstddef>
#include <deque>

namespace glider {

/**
 * NLC while a setpoint transition is in progress or while the disturbance
 * indicator is high, PID otherwise. The indicator must cross
 * threshold·(1 + hysteresis) to engage NLC and fall below
 * threshold·(1 − hysteresis) to release it.
 */
ControlMode hybrid_select(double indicator, double threshold, bool in_transition,
                          ControlMode current, double hysteresis = 0.1);

/// RMS of the last `capacity` pushed values.
class RmsWindow {
 public:
  explicit RmsWindow(std::size_t capacity);
  void push(double x);
  double rms() const;
  void clear();

 private:
  std::size_t capacity_;
  std::deque<double> values_;
  double sum_sq_{0};
};

}  // namespace glider
