#pragma once

/**
 * @file simulate.hpp
 * @brief Fixed-step closed/open-loop simulation harness and trajectory I/O.
 */

#include "glider/control/command.hpp"
#include "glider/model/types.hpp"
#include "glider/sim/disturbance.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace glider {

struct SimConfig {
  double dt{0.001};
  double duration{10.0};
  std::uint64_t seed{1};
  DisturbanceSpec disturbance;
  VehicleState<double> initial_state;
  ActuatorState<double> initial_actuators;
  double control_rate_hz{10.0};
  /// Plant steps between logged samples.
  int log_decimation{100};
};

/// Problems with a configuration, empty when valid.
std::vector<std::string> validate(const SimConfig& config);

struct TrajectorySample {
  double t{0};
  VehicleState<double> state;
  ActuatorState<double> act;
  ControlCommand command;
  References refs;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  /// Control ticks whose command had to be clamped to the actuator range.
  std::int64_t clamp_events{0};
  /// Set when an envelope check stopped the run early.
  std::optional<std::string> abort_reason;
};

/// Returns a reason to stop the run, or nullopt to continue.
using EnvelopeCheck = std::function<std::optional<std::string>(double t, const VehicleState<double>&)>;

/// Optional per-tick observer, called with each control output after clamping.
using TickObserver = std::function<void(double t, const VehicleState<double>&, const ControlOutput&)>;

/**
 * Steps the plant with rk4_step at config.dt. The controller runs every
 * 1/control_rate_hz seconds and its command is clamped to params.limits and
 * held until the next tick. The run ends early once controller.finished()
 * is true. Throws DivergenceError if the state blows up.
 */
Trajectory simulate(const SimConfig& config, const VehicleParams<double>& params,
                    Controller& controller, const EnvelopeCheck& envelope = {},
                    const TickObserver& observer = {});

/// Clamps a command to the actuator ranges. Returns true when anything moved.
bool clamp_command(ControlCommand& cmd, const ActuatorLimits& limits);

/// Open-loop step-hold actuator schedule.
class ScheduleController : public Controller {
 public:
  struct Step {
    double t;
    ControlCommand command;
  };
  explicit ScheduleController(std::vector<Step> steps);
  ControlOutput update(double t, const VehicleState<double>& state,
                       const ActuatorState<double>& act) override;

 private:
  std::vector<Step> steps_;
};

inline constexpr const char* kTrajectoryHeader =
    "t,x,y,z,phi,theta,psi,u,v,w,p,q,r,gamma,delta_rs,m_b,ref_theta,ref_z,ref_phi,mode";

/// CSV with kTrajectoryHeader, nine significant digits per float.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
/// Parses a file produced by write_trajectory_csv; validates header and row shape.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace glider
