#pragma once

/**
 * @file runs.hpp
 * @brief The simulate / compare / maneuver / estimate workflows without file
 *        output. Each returns its results plus a JSON report.
 */

#include "glider/cli/scenario.hpp"
#include "glider/sim/metrics.hpp"
#include "glider/sysid/mcmc.hpp"

#include <json.hpp>

#include <functional>
#include <vector>

namespace glider {

/// GliderController driven by a time-ordered list of setpoint events.
class SetpointController : public Controller {
 public:
  SetpointController(const VehicleParams<double>& params, GliderControllerConfig config,
                     std::vector<SetpointEvent> events);
  ControlOutput update(double t, const VehicleState<double>& state,
                       const ActuatorState<double>& act) override;
  const GliderController& inner() const { return inner_; }

 private:
  GliderController inner_;
  std::vector<SetpointEvent> events_;
  std::size_t next_{0};
};

/// Controller internals captured at one control tick.
struct TickRecord {
  double t{0};
  ControlMode mode{ControlMode::kOpenLoop};
  bool pitch_active{false}, depth_active{false};
  double s_pitch{0}, s_depth{0};
  double k2_pitch{0}, k2_depth{0};
  double bound_pitch{0}, bound_depth{0};
  bool in_transition{false};
};

TickRecord record_tick(double t, const GliderController& c);

struct LyapunovAudit {
  /// Ticks whose predecessor lay outside the boundary layer of an active channel.
  std::int64_t ticks_outside{0};
  /// Of those, ticks where V_t did not increase.
  std::int64_t non_increasing{0};
  double fraction() const {
    return ticks_outside ? static_cast<double>(non_increasing) / ticks_outside : 1.0;
  }
};

LyapunovAudit audit_lyapunov(const std::vector<TickRecord>& ticks, double eps_pitch,
                             double eps_depth);

struct K2Audit {
  std::int64_t samples{0};
  std::int64_t satisfied{0};
  double fraction() const { return samples ? static_cast<double>(satisfied) / samples : 1.0; }
};

K2Audit audit_k2(const std::vector<TickRecord>& ticks);

struct ModeSwitch {
  double t{0};
  ControlMode from{ControlMode::kOpenLoop};
  ControlMode to{ControlMode::kOpenLoop};
};

std::vector<ModeSwitch> mode_switches(const std::vector<TickRecord>& ticks);

struct SimulationResult {
  Trajectory trajectory;
  std::vector<TickRecord> ticks;
  nlohmann::json report;
};

/// One closed-loop run driven by config.setpoints. Throws DivergenceError.
SimulationResult run_simulation(const ScenarioConfig& config);

struct CompareCell {
  Strategy strategy{Strategy::kNlc};
  Channel channel{Channel::kPitch};
  double target{0};
  double sigma{0};
  std::uint64_t seed{0};
  bool diverged{false};
  std::string error;
  TrackingMetrics metrics;
  Trajectory trajectory;
};

/// Every (strategy, target, σ) cell of config.compare, evaluated concurrently.
std::vector<CompareCell> run_compare(const ScenarioConfig& config, bool keep_trajectories = false);
nlohmann::json compare_report(const ScenarioConfig& config, const std::vector<CompareCell>& cells);
/// Scenario of a single comparison cell (also used by the acceptance suite).
SimConfig compare_cell_sim(const ScenarioConfig& config, Channel channel, double sigma,
                           std::uint64_t seed);

struct ManeuverResult {
  Trajectory trajectory;
  std::vector<TickRecord> ticks;
  std::vector<SegmentRecord> segments;
  bool completed{false};
  nlohmann::json report;
};

ManeuverResult run_maneuver(const ScenarioConfig& config);

struct EstimateResult {
  std::vector<Chain> chains;
  std::vector<PosteriorSummary> summaries;  // one per chain
  std::optional<PosteriorSummary> pooled;   // when merge_chains is set
  std::optional<ParameterVector> truth;
  std::vector<SyntheticRun> corpus;
  nlohmann::json report;
};

/// Synthetic when no dataset is given: builds the corpus from config.vehicle.
EstimateResult run_estimate(const ScenarioConfig& config, bool synthetic);

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace glider
