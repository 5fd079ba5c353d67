#pragma once

/**
 * @file glider_controller.hpp
 * @brief Closed-loop policy: reference filters, NLC or PID on pitch and depth,
 *        feedforward/PD on roll, and the hybrid switch between NLC and PID.
 */

#include "glider/control/command.hpp"
#include "glider/control/hybrid.hpp"
#include "glider/control/nlc.hpp"
#include "glider/control/pid.hpp"
#include "glider/control/reference_filter.hpp"

#include <deque>
#include <optional>

namespace glider {

enum class Strategy { kNlc, kPid, kHybrid };

/// NLC gains of a channel plus the rule that sets k2 at run time.
struct NlcChannelConfig {
  double k1{1.0};
  double k3{2.0};
  double epsilon{0.05};
  /// k2 = max(k2_floor, k2_margin · max bound over the last k2_window_s seconds).
  double k2_margin{1.2};
  double k2_floor{0.0};
  double k2_window_s{2.0};
};

struct FilterConfig {
  double omega_n{0.5};
  double zeta{1.0};
};

struct RollConfig {
  double kp{1.0};
  double kd{1.0};
};

struct HybridConfig {
  double threshold{0.05};
  double hysteresis{0.1};
  double window_s{2.0};
  /// A transition is over once |u_c − ref| is below this fraction of the step
  /// (or transition_abs, whichever is larger) and the reference has settled.
  double transition_fraction{0.05};
  double transition_abs{0.01};
};

struct GliderControllerConfig {
  Strategy strategy{Strategy::kNlc};
  double control_dt{0.1};
  NlcChannelConfig pitch_nlc;
  NlcChannelConfig depth_nlc{1.0, 2.0, 0.05, 1.2, 0.0, 2.0};
  PidGains pitch_pid;
  PidGains depth_pid;
  RollConfig roll;
  FilterConfig pitch_filter;
  FilterConfig depth_filter{0.05, 1.0};
  FilterConfig roll_filter;
  HybridConfig hybrid;
};

/// Per-tick internals for audits (Lyapunov, k2 bound, mode log).
struct ControllerDiagnostics {
  bool pitch_active{false};
  bool depth_active{false};
  NlcResult pitch;
  NlcResult depth;
  double k2_pitch{0};
  double k2_depth{0};
  double indicator{0};
  bool in_transition{false};
  ControlMode mode{ControlMode::kNlc};
};

class GliderController : public Controller {
 public:
  GliderController(const VehicleParams<double>& params, GliderControllerConfig config);

  /// Targets take effect through the reference filters at the next tick.
  void set_pitch_target(double theta);
  void set_depth_target(double z);
  void set_roll_target(double phi);
  /// Releases depth control and holds the given ballast instead.
  void set_ballast(double m_b);
  void release_pitch(double delta_rs);

  ControlOutput update(double t, const VehicleState<double>& state,
                       const ActuatorState<double>& act) override;

  const ControllerDiagnostics& diagnostics() const { return diag_; }
  const GliderControllerConfig& config() const { return config_; }

 private:
  struct Channel {
    explicit Channel(const FilterConfig& f) : filter(f.omega_n, f.zeta) {}
    ReferenceFilter filter;
    std::optional<double> target;
    bool initialized{false};
    double step_size{0};
    PidState pid;
    std::deque<double> bounds;
    double prev_error{0};
    bool has_prev_error{false};
  };

  bool in_transition(const Channel& ch) const;
  double running_k2(Channel& ch, double bound, const NlcChannelConfig& cfg) const;
  void retarget(Channel& ch, double value);

  const VehicleParams<double>* params_;
  GliderControllerConfig config_;
  Channel pitch_;
  Channel depth_;
  Channel roll_;
  double ballast_{0};
  double rail_{0};
  ControlMode mode_{ControlMode::kNlc};
  RmsWindow innovation_;
  ControllerDiagnostics diag_;
};

}  // namespace glider
