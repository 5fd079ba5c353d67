#include "glider/control/glider_controller.hpp"

#include "glider/control/linearization.hpp"
#include "glider/errors.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace glider {

namespace {
std::size_t window_ticks(double window_s, double dt) {
  return static_cast<std::size_t>(std::max(1.0, std::round(window_s / dt)));
}

NlcGains gains_of(const NlcChannelConfig& c, double k2) { return {c.k1, k2, c.k3, c.epsilon}; }

// PID error convention: positive error must ask for a positive input. Pitch
// input gain C is negative (sliding mass forward pitches the nose down), the
// depth input gain G is positive.
constexpr double kPitchInputSign = -1.0;
constexpr double kDepthInputSign = 1.0;
}  // namespace

GliderController::GliderController(const VehicleParams<double>& params,
                                   GliderControllerConfig config)
    : params_(&params),
      config_(config),
      pitch_(config.pitch_filter),
      depth_(config.depth_filter),
      roll_(config.roll_filter),
      innovation_(window_ticks(config.hybrid.window_s, config.control_dt)) {
  if (!(config.control_dt > 0)) throw ValidationError("control_dt must be > 0");
  for (const auto* c : {&config.pitch_nlc, &config.depth_nlc}) {
    if (!(c->k1 > 0) || !(c->k3 > 0)) throw ValidationError("NLC k1 and k3 must be > 0");
    if (!(c->epsilon > 0) || !(c->epsilon < 1)) throw ValidationError("NLC epsilon must be in (0, 1)");
    if (!(c->k2_margin >= 1) || c->k2_floor < 0 || !(c->k2_window_s > 0))
      throw ValidationError("k2 rule needs margin >= 1, floor >= 0, window > 0");
  }
  if (!(config.hybrid.threshold > 0)) throw ValidationError("hybrid threshold must be > 0");
  mode_ = config.strategy == Strategy::kPid ? ControlMode::kPid : ControlMode::kNlc;
}

void GliderController::retarget(Channel& ch, double value) {
  ch.step_size = ch.initialized ? std::abs(value - ch.filter.output(value).x) : 0.0;
  ch.target = value;
}

void GliderController::set_pitch_target(double theta) { retarget(pitch_, theta); }
void GliderController::set_depth_target(double z) { retarget(depth_, z); }
void GliderController::set_roll_target(double phi) { retarget(roll_, phi); }

void GliderController::set_ballast(double m_b) {
  depth_.target.reset();
  depth_.initialized = false;
  depth_.has_prev_error = false;
  ballast_ = m_b;
}

void GliderController::release_pitch(double delta_rs) {
  pitch_.target.reset();
  pitch_.initialized = false;
  pitch_.has_prev_error = false;
  rail_ = delta_rs;
}

bool GliderController::in_transition(const Channel& ch) const {
  if (!ch.target) return false;
  const auto out = ch.filter.output(*ch.target);
  const double tol =
      std::max(config_.hybrid.transition_fraction * ch.step_size, config_.hybrid.transition_abs);
  return std::abs(*ch.target - out.x) > tol;
}

double GliderController::running_k2(Channel& ch, double bound, const NlcChannelConfig& cfg) const {
  ch.bounds.push_back(bound);
  while (ch.bounds.size() > window_ticks(cfg.k2_window_s, config_.control_dt)) ch.bounds.pop_front();
  const double peak = *std::max_element(ch.bounds.begin(), ch.bounds.end());
  return std::max({cfg.k2_floor, cfg.k2_margin * peak, 1e-12});
}

ControlOutput GliderController::update(double, const VehicleState<double>& state,
                                       const ActuatorState<double>& act) {
  const double dt = config_.control_dt;
  ControlOutput out;
  out.command = {act.gamma, rail_, ballast_, mode_};
  diag_.pitch_active = pitch_.target.has_value();
  diag_.depth_active = depth_.target.has_value();

  // Roll: feedforward/PD only.
  if (roll_.target) {
    if (!roll_.initialized) {
      roll_.filter.reset(state.angles.phi);
      roll_.initialized = true;
    }
    const auto ref = roll_.filter.output(*roll_.target);
    out.command.gamma = roll_control(ref.x, ref.x_dot, state.angles.phi, roll_rate(state),
                                     config_.roll.kp, config_.roll.kd, params_->limits.gamma_max);
    out.refs.phi = ref.x;
    roll_.filter.step(*roll_.target, dt);
  }

  // Hybrid mode for this tick, from the state before the commands below.
  const bool transition = in_transition(pitch_) || in_transition(depth_);
  const ControlMode previous = mode_;
  if (config_.strategy == Strategy::kHybrid)
    mode_ = hybrid_select(innovation_.rms(), config_.hybrid.threshold, transition, mode_,
                          config_.hybrid.hysteresis);
  diag_.in_transition = transition;
  diag_.indicator = innovation_.rms();
  diag_.mode = mode_;
  out.command.mode = mode_;
  const bool handover = previous == ControlMode::kNlc && mode_ == ControlMode::kPid;

  double innovation_sq = 0;
  auto run_channel = [&](Channel& ch, const NlcChannelConfig& nlc_cfg, const PidGains& pid_gains,
                         double input_sign, double measured, double applied, double held,
                         NlcResult& result, double& k2_out,
                         bool is_pitch) -> std::pair<double, double> {
    if (!ch.target) return {held, References::kNone};
    if (!ch.initialized) {
      ch.filter.reset(measured);
      ch.initialized = true;
    }
    const ChannelTarget ref = ch.filter.output(*ch.target);

    const LinearizedChannel lin = is_pitch ? pitch_linearization(state, act, *params_)
                                           : depth_linearization(state, act, *params_);
    const double x_dot = is_pitch ? pitch_rate(state) : depth_rate(state);
    const double bound = k2_lower_bound(x_dot - ref.x_dot, ref.x_ddot, lin.f, lin.g, nlc_cfg.k1);
    k2_out = running_k2(ch, bound, nlc_cfg);
    const NlcGains gains = gains_of(nlc_cfg, k2_out);
    result = is_pitch ? pitch_control(state, act, *params_, ref, gains)
                      : depth_control(state, act, *params_, ref, gains);

    const double limit = is_pitch ? params_->limits.delta_rs_max : params_->limits.m_b_max;
    const double e_pid = input_sign * (ref.x - measured);
    if (handover) pid_preload(pid_gains, e_pid, applied, dt, ch.pid);
    const double u_pid = std::clamp(pid_step(pid_gains, e_pid, dt, ch.pid), -limit, limit);

    if (ch.has_prev_error) {
      const double innov = (result.e - ch.prev_error) / dt;
      innovation_sq += innov * innov;
    }
    ch.prev_error = result.e;
    ch.has_prev_error = true;

    ch.filter.step(*ch.target, dt);
    return {mode_ == ControlMode::kPid ? u_pid : result.command, ref.x};
  };

  std::tie(out.command.delta_rs, out.refs.theta) =
      run_channel(pitch_, config_.pitch_nlc, config_.pitch_pid, kPitchInputSign,
                  state.angles.theta, act.delta_rs, rail_, diag_.pitch, diag_.k2_pitch, true);
  std::tie(out.command.m_b, out.refs.z) =
      run_channel(depth_, config_.depth_nlc, config_.depth_pid, kDepthInputSign, state.pose.z,
                  act.m_b, ballast_, diag_.depth, diag_.k2_depth, false);
  if (diag_.pitch_active || diag_.depth_active) innovation_.push(std::sqrt(innovation_sq));

  if (!diag_.pitch_active) rail_ = out.command.delta_rs;
  if (!diag_.depth_active) ballast_ = out.command.m_b;
  return out;
}

}  // namespace glider
