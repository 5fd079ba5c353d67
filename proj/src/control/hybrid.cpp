#include "glider/control/hybrid.hpp"

#include "glider/errors.hpp"

#include <cmath>

namespace glider {

ControlMode hybrid_select(double indicator, double threshold, bool in_transition,
                          ControlMode current, double hysteresis) {
  if (!(threshold > 0)) throw ValidationError("hybrid threshold must be > 0");
  if (in_transition) return ControlMode::kNlc;
  if (current == ControlMode::kNlc) {
    return indicator < threshold * (1.0 - hysteresis) ? ControlMode::kPid : ControlMode::kNlc;
  }
  return indicator > threshold * (1.0 + hysteresis) ? ControlMode::kNlc : ControlMode::kPid;
}

RmsWindow::RmsWindow(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

void RmsWindow::push(double x) {
  values_.push_back(x);
  if (values_.size() > capacity_) values_.pop_front();
  sum_sq_ = 0;
  for (double v : values_) sum_sq_ += v * v;
}

double RmsWindow::rms() const {
  if (values_.empty()) return 0.0;
  return std::sqrt(sum_sq_ / static_cast<double>(values_.size()));
}

void RmsWindow::clear() {
  values_.clear();
  sum_sq_ = 0;
}

}  // namespace glider
