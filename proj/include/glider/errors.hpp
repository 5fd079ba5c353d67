#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace glider {

class GliderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Attitude too close to θ = ±π/2 for the Euler-rate map.
class GimbalLockError : public GliderError {
 public:
  explicit GimbalLockError(double theta)
      : GliderError("attitude near gimbal lock: theta = " + std::to_string(theta)),
        theta_(theta) {}
  double theta() const { return theta_; }

 private:
  double theta_;
};

/// Input gain of a feedback-linearized channel too small to invert.
class DegenerateGainError : public GliderError {
 public:
  using GliderError::GliderError;
};

class SingularInertiaError : public GliderError {
 public:
  using GliderError::GliderError;
};

/// Integration produced a non-finite state.
class DivergenceError : public GliderError {
 public:
  DivergenceError(double t, const std::string& what)
      : GliderError("integration diverged at t = " + std::to_string(t) + ": " + what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// Collects every problem found while validating an input.
class ValidationError : public GliderError {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : GliderError(join(problems)), problems_(std::move(problems)) {}
  explicit ValidationError(const std::string& problem)
      : ValidationError(std::vector<std::string>{problem}) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string out;
    for (const auto& s : p) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> problems_;
};

class IoError : public GliderError {
 public:
  using GliderError::GliderError;
};

}  // namespace glider
