#pragma once

#include "glider/model/types.hpp"

#include <cmath>
#include <limits>
#include <string_view>

namespace glider {

enum class ControlMode { kOpenLoop, kNlc, kPid };

constexpr std::string_view to_string(ControlMode m) {
  switch (m) {
    case ControlMode::kNlc: return "NLC";
    case ControlMode::kPid: return "PID";
    case ControlMode::kOpenLoop: break;
  }
  return "OPEN";
}

/// Actuator command emitted once per control tick.
struct ControlCommand {
  double gamma{0};
  double delta_rs{0};
  double m_b{0};
  ControlMode mode{ControlMode::kOpenLoop};
};

/// Reference values a controller is tracking; NaN for channels it leaves alone.
struct References {
  static constexpr double kNone = std::numeric_limits<double>::quiet_NaN();
  double theta{kNone};
  double z{kNone};
  double phi{kNone};
};

struct ControlOutput {
  ControlCommand command;
  References refs;
};

/// Closed-loop policy or open-loop schedule, called at the control rate.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControlOutput update(double t, const VehicleState<double>& state,
                               const ActuatorState<double>& act) = 0;
  /// A controller that reports true ends the simulation after the current tick.
  virtual bool finished() const { return false; }
};

}  // namespace glider
