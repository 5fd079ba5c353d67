#include "glider/cli/runs.hpp"

#include "glider/errors.hpp"
#include "glider/model/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace glider {

using nlohmann::json;

namespace {

constexpr double kRad2Deg = 180.0 / std::numbers::pi;

json metrics_json(const TrackingMetrics& m, double target) {
  return {{"target", target},
          {"rms_error", m.rms_error},
          {"mean_abs_error", m.mean_abs_error},
          {"final_error", m.final_error},
          {"percent_error_of_target", m.percent_error_of_target},
          {"percent_is_absolute", m.percent_is_absolute},
          {"samples", m.samples}};
}

json switches_json(const std::vector<ModeSwitch>& switches) {
  json out = json::array();
  for (const auto& s : switches)
    out.push_back({{"t", s.t}, {"from", to_string(s.from)}, {"to", to_string(s.to)}});
  return out;
}

EnvelopeCheck depth_envelope(const DepthEnvelope& env) {
  return [env](double, const VehicleState<double>& s) -> std::optional<std::string> {
    if (s.pose.z < env.z_min || s.pose.z > env.z_max) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "depth %.3f m outside [%.3f, %.3f] m", s.pose.z, env.z_min,
                    env.z_max);
      return std::string(buf);
    }
    return std::nullopt;
  };
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kNlc: return "nlc";
    case Strategy::kPid: return "pid";
    case Strategy::kHybrid: break;
  }
  return "hybrid";
}

}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SetpointController::SetpointController(const VehicleParams<double>& params,
                                       GliderControllerConfig config,
                                       std::vector<SetpointEvent> events)
    : inner_(params, config), events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const SetpointEvent& a, const SetpointEvent& b) { return a.t < b.t; });
}

ControlOutput SetpointController::update(double t, const VehicleState<double>& state,
                                         const ActuatorState<double>& act) {
  for (; next_ < events_.size() && events_[next_].t <= t + 1e-9; ++next_) {
    const auto& e = events_[next_];
    if (e.theta) inner_.set_pitch_target(*e.theta);
    if (e.delta_rs) inner_.release_pitch(*e.delta_rs);
    if (e.z) inner_.set_depth_target(*e.z);
    if (e.ballast) inner_.set_ballast(*e.ballast);
    if (e.phi) inner_.set_roll_target(*e.phi);
  }
  return inner_.update(t, state, act);
}

TickRecord record_tick(double t, const GliderController& c) {
  const auto& d = c.diagnostics();
  TickRecord r;
  r.t = t;
  r.mode = d.mode;
  r.pitch_active = d.pitch_active;
  r.depth_active = d.depth_active;
  r.s_pitch = d.pitch_active ? d.pitch.s : 0.0;
  r.s_depth = d.depth_active ? d.depth.s : 0.0;
  r.k2_pitch = d.k2_pitch;
  r.k2_depth = d.k2_depth;
  r.bound_pitch = d.pitch.k2_bound;
  r.bound_depth = d.depth.k2_bound;
  r.in_transition = d.in_transition;
  return r;
}

LyapunovAudit audit_lyapunov(const std::vector<TickRecord>& ticks, double eps_pitch,
                             double eps_depth) {
  LyapunovAudit a;
  for (std::size_t k = 1; k < ticks.size(); ++k) {
    const auto& prev = ticks[k - 1];
    const auto& cur = ticks[k];
    const bool outside = (prev.pitch_active && std::abs(prev.s_pitch) >= eps_pitch) ||
                         (prev.depth_active && std::abs(prev.s_depth) >= eps_depth);
    if (!outside) continue;
    ++a.ticks_outside;
    const double v_prev = lyapunov_total(prev.s_depth, prev.s_pitch);
    const double v_cur = lyapunov_total(cur.s_depth, cur.s_pitch);
    if (v_cur <= v_prev * (1.0 + 1e-12) + 1e-15) ++a.non_increasing;
  }
  return a;
}

K2Audit audit_k2(const std::vector<TickRecord>& ticks) {
  K2Audit a;
  for (const auto& t : ticks) {
    if (t.pitch_active) {
      ++a.samples;
      if (t.bound_pitch <= t.k2_pitch) ++a.satisfied;
    }
    if (t.depth_active) {
      ++a.samples;
      if (t.bound_depth <= t.k2_depth) ++a.satisfied;
    }
  }
  return a;
}

std::vector<ModeSwitch> mode_switches(const std::vector<TickRecord>& ticks) {
  std::vector<ModeSwitch> out;
  for (std::size_t k = 1; k < ticks.size(); ++k)
    if (ticks[k].mode != ticks[k - 1].mode) out.push_back({ticks[k].t, ticks[k - 1].mode, ticks[k].mode});
  return out;
}

SimulationResult run_simulation(const ScenarioConfig& config) {
  SimulationResult res;
  SimConfig sim = config.sim;
  sim.seed = config.seed;
  SetpointController ctl(config.vehicle, config.controller, config.setpoints);
  auto observer = [&](double t, const VehicleState<double>&, const ControlOutput&) {
    res.ticks.push_back(record_tick(t, ctl.inner()));
  };
  res.trajectory = simulate(sim, config.vehicle, ctl,
                            config.envelope ? depth_envelope(*config.envelope) : EnvelopeCheck{},
                            observer);

  // Metrics cover the last target of each channel, from the time it was set.
  struct Last { bool set{false}; double value{0}; double since{0}; } theta, z, phi;
  for (const auto& e : config.setpoints) {
    if (e.theta) theta = {true, *e.theta, e.t};
    if (e.delta_rs) theta.set = false;
    if (e.z) z = {true, *e.z, e.t};
    if (e.ballast) z.set = false;
    if (e.phi) phi = {true, *e.phi, e.t};
  }
  json metrics = json::object();
  auto add_metrics = [&](const char* key, Channel ch, const Last& target) {
    if (!target.set) return;
    Trajectory segment;
    for (const auto& s : res.trajectory.samples)
      if (s.t >= target.since) segment.samples.push_back(s);
    if (segment.samples.empty()) return;
    metrics[key] = metrics_json(compute_metrics(segment, ch, target.value), target.value);
    metrics[key]["since"] = target.since;
  };
  add_metrics("pitch", Channel::kPitch, theta);
  add_metrics("depth", Channel::kDepth, z);
  add_metrics("roll", Channel::kRoll, phi);

  const auto lyap = audit_lyapunov(res.ticks, config.controller.pitch_nlc.epsilon,
                                   config.controller.depth_nlc.epsilon);
  const auto k2 = audit_k2(res.ticks);
  res.report = {
      {"command", "simulate"},
      {"config_hash", config_hash(config)},
      {"seed", config.seed},
      {"strategy", strategy_name(config.controller.strategy)},
      {"t_end", res.trajectory.samples.back().t},
      {"samples", res.trajectory.samples.size()},
      {"clamp_events", res.trajectory.clamp_events},
      {"aborted", res.trajectory.abort_reason ? json(*res.trajectory.abort_reason) : json(nullptr)},
      {"metrics", metrics},
      {"mode_switches", switches_json(mode_switches(res.ticks))},
      {"lyapunov", {{"ticks_outside_layer", lyap.ticks_outside},
                    {"non_increasing", lyap.non_increasing},
                    {"fraction", lyap.fraction()}}},
      {"k2", {{"samples", k2.samples}, {"satisfied", k2.satisfied}, {"fraction", k2.fraction()}}},
  };
  return res;
}

SimConfig compare_cell_sim(const ScenarioConfig& config, Channel channel, double sigma,
                           std::uint64_t seed) {
  SimConfig sim = config.sim;
  sim.initial_state = {};
  sim.initial_actuators = {};
  sim.duration = channel == Channel::kDepth ? config.compare.depth_duration
                                            : config.compare.pitch_duration;
  sim.disturbance.sigma = Vec6<double>::Constant(sigma);
  sim.seed = seed;
  return sim;
}

std::vector<CompareCell> run_compare(const ScenarioConfig& config, bool keep_trajectories) {
  const auto& spec = config.compare;
  if ((spec.pitch_targets.empty() && spec.depth_targets.empty()) || spec.sigma_levels.empty())
    throw ValidationError("compare: the target × disturbance matrix is empty");

  std::vector<CompareCell> cells;
  std::uint64_t column = 0;
  for (std::size_t si = 0; si < spec.sigma_levels.size(); ++si) {
    auto add = [&](Channel ch, double target) {
      const std::uint64_t seed = derive_seed(config.seed, column++);
      for (Strategy st : {Strategy::kNlc, Strategy::kPid}) {
        CompareCell c;
        c.strategy = st;
        c.channel = ch;
        c.target = target;
        c.sigma = spec.sigma_levels[si];
        c.seed = seed;
        cells.push_back(c);
      }
    };
    for (double th : spec.pitch_targets) add(Channel::kPitch, th);
    for (double z : spec.depth_targets) add(Channel::kDepth, z);
  }

  parallel_for(cells.size(), [&](std::size_t i) {
    CompareCell& c = cells[i];
    GliderControllerConfig cc = config.controller;
    cc.strategy = c.strategy;
    GliderController ctl(config.vehicle, cc);
    ctl.set_roll_target(0.0);
    if (c.channel == Channel::kPitch) {
      ctl.set_pitch_target(c.target);
      ctl.set_ballast(c.target > 0 ? -spec.glide_ballast : c.target < 0 ? spec.glide_ballast : 0.0);
    } else {
      ctl.set_pitch_target(0.0);
      ctl.set_depth_target(c.target);
    }
    try {
      Trajectory traj = simulate(compare_cell_sim(config, c.channel, c.sigma, c.seed),
                                 config.vehicle, ctl);
      c.metrics = compute_metrics(traj, c.channel, c.target);
      if (keep_trajectories) c.trajectory = std::move(traj);
    } catch (const GliderError& e) {
      c.diverged = true;
      c.error = e.what();
    }
  });
  return cells;
}

json compare_report(const ScenarioConfig& config, const std::vector<CompareCell>& cells) {
  json rows = json::array();
  bool ordering = true;
  for (std::size_t i = 0; i + 1 < cells.size(); i += 2) {
    const auto& n = cells[i];
    const auto& p = cells[i + 1];
    const bool nlc_better = !n.diverged && (p.diverged || n.metrics.percent_error_of_target <
                                                              p.metrics.percent_error_of_target);
    ordering = ordering && nlc_better;
    const bool pitch = n.channel == Channel::kPitch;
    rows.push_back({{"channel", to_string(n.channel)},
                    {"target", pitch ? n.target * kRad2Deg : n.target},
                    {"target_unit", pitch ? "deg" : "m"},
                    {"sigma", n.sigma},
                    {"seed", n.seed},
                    {"nlc_percent_error", n.diverged ? json(nullptr) : json(n.metrics.percent_error_of_target)},
                    {"pid_percent_error", p.diverged ? json(nullptr) : json(p.metrics.percent_error_of_target)},
                    {"percent_is_absolute", n.metrics.percent_is_absolute},
                    {"nlc_diverged", n.diverged},
                    {"pid_diverged", p.diverged},
                    {"nlc_better", nlc_better}});
  }
  return {{"command", "compare"},
          {"config_hash", config_hash(config)},
          {"seed", config.seed},
          {"cells", rows},
          {"nlc_better_everywhere", ordering}};
}

ManeuverResult run_maneuver(const ScenarioConfig& config) {
  ManeuverResult res;
  const ManeuverSpec& spec = config.maneuver;
  GliderControllerConfig cc = config.controller;
  cc.strategy = Strategy::kHybrid;
  ManeuverController ctl(config.vehicle, cc, spec);

  SimConfig sim = config.sim;
  sim.seed = config.seed;
  sim.duration = spec.max_duration;
  sim.initial_state.pose.z = spec.start_depth;
  auto observer = [&](double t, const VehicleState<double>&, const ControlOutput& out) {
    TickRecord r = record_tick(t, ctl.inner());
    r.mode = out.command.mode;
    res.ticks.push_back(r);
  };
  res.trajectory = simulate(sim, config.vehicle, ctl,
                            depth_envelope(config.envelope.value_or(DepthEnvelope{})), observer);
  res.segments = ctl.log();
  res.completed = ctl.finished() && !res.trajectory.abort_reason;

  const double t_final = res.trajectory.samples.back().t;
  auto psi_at = [&](double t) {
    for (const auto& s : res.trajectory.samples)
      if (s.t >= t - 1e-9) return s.state.angles.psi;
    return res.trajectory.samples.back().state.angles.psi;
  };
  auto tick_index = [&](double t) {
    return static_cast<std::size_t>(std::lround(t * config.sim.control_rate_hz));
  };

  json segments = json::array();
  double circle_heading = 0;
  json s_turns = json::array();
  bool nlc_at_transitions = true;
  double min_steady_pid = 1.0;
  for (const auto& rec : res.segments) {
    const double t_end = rec.t_end < 0 ? t_final : rec.t_end;
    const double dpsi = (psi_at(t_end) - psi_at(rec.t_start)) * kRad2Deg;
    const std::size_t k0 = tick_index(rec.t_start);
    const std::size_t k1 = std::min(tick_index(t_end), res.ticks.size());
    const bool nlc_start = k0 < res.ticks.size() && res.ticks[k0].mode == ControlMode::kNlc;
    std::size_t pid = 0, n = 0;
    for (std::size_t k = (k0 + k1) / 2; k < k1; ++k, ++n) pid += res.ticks[k].mode == ControlMode::kPid;
    const double pid_fraction = n ? static_cast<double>(pid) / static_cast<double>(n) : 0.0;
    nlc_at_transitions = nlc_at_transitions && nlc_start;
    min_steady_pid = std::min(min_steady_pid, pid_fraction);
    if (!rec.segment.s_phase) circle_heading += dpsi;
    if (rec.segment.s_phase && rec.segment.dive) s_turns.push_back(rec.segment.roll_target > 0 ? 1 : -1);
    segments.push_back({{"cycle", rec.segment.cycle},
                        {"kind", rec.segment.dive ? "dive" : "climb"},
                        {"phase", rec.segment.s_phase ? "s_curve" : "circle"},
                        {"roll_target_deg", rec.segment.roll_target * kRad2Deg},
                        {"t_start", rec.t_start},
                        {"t_end", t_end},
                        {"heading_change_deg", dpsi},
                        {"nlc_at_start", nlc_start},
                        {"pid_fraction_second_half", pid_fraction}});
  }
  double zmin = res.trajectory.samples.front().state.pose.z, zmax = zmin;
  for (const auto& s : res.trajectory.samples) {
    zmin = std::min(zmin, s.state.pose.z);
    zmax = std::max(zmax, s.state.pose.z);
  }
  res.report = {{"command", "maneuver"},
                {"config_hash", config_hash(config)},
                {"seed", config.seed},
                {"pattern", to_string(spec.pattern)},
                {"completed", res.completed},
                {"aborted", res.trajectory.abort_reason ? json(*res.trajectory.abort_reason) : json(nullptr)},
                {"t_end", t_final},
                {"depth_min", zmin},
                {"depth_max", zmax},
                {"circle_heading_change_deg", circle_heading},
                {"s_phase_dive_roll_signs", s_turns},
                {"nlc_at_every_transition", nlc_at_transitions},
                {"min_pid_fraction_steady", min_steady_pid},
                {"clamp_events", res.trajectory.clamp_events},
                {"segments", segments},
                {"mode_switches", switches_json(mode_switches(res.ticks))}};
  return res;
}

EstimateResult run_estimate(const ScenarioConfig& config, bool synthetic) {
  const EstimateSpec& spec = config.estimate;
  EstimateResult res;
  std::vector<DerivedStateSeries> series;
  int gimbal_dropped = 0;
  auto derive = [&](const MocapDataset& ds) {
    for (const auto& run : ds.runs) {
      series.push_back(differentiate(run, config.vehicle, spec.differentiation));
      gimbal_dropped += series.back().gimbal_dropped;
    }
  };
  if (synthetic) {
    res.corpus = generate_corpus(config.vehicle, spec.corpus);
    res.truth = config.vehicle.hydro.vector();
    if (spec.route == EstimateRoute::kAccelerations) series = to_series(res.corpus);
    else derive(to_dataset(res.corpus));
  } else {
    if (!spec.dataset) throw ValidationError("estimate: no dataset given (use --dataset or --synthetic)");
    derive(load_mocap(*spec.dataset));
  }

  const QuadraticObjective objective = QuadraticObjective::build(series, config.vehicle, spec.weights);
  if (objective.observations() == 0) throw ValidationError("estimate: no usable observations");
  if (!std::isfinite(objective.c()) || !objective.H().allFinite())
    throw ValidationError("estimate: objective is not finite");

  std::vector<std::string> names(HydroCoefficients<double>::kNames.begin(),
                                 HydroCoefficients<double>::kNames.end());
  const PriorBox& box = spec.prior;
  auto target = [&](const Eigen::VectorXd& x) {
    return log_target(ParameterVector(x), objective, box, spec.sigma_noise);
  };

  if (spec.init == ChainInit::kTruth && !res.truth)
    throw ValidationError("estimate.init = truth needs a synthetic corpus");
  res.chains.resize(static_cast<std::size_t>(spec.chains));
  parallel_for(res.chains.size(), [&](std::size_t c) {
    ParameterVector init;
    if (spec.init == ChainInit::kTruth) {
      init = *res.truth;
    } else if (spec.init == ChainInit::kLeastSquares) {
      init = objective.least_squares().cwiseMax(box.lo).cwiseMin(box.hi);
    } else {
      Rng rng(derive_seed(config.seed, 1000 + c));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int i = 0; i < 12; ++i) init(i) = box.lo(i) + u(rng) * box.range()(i);
    }
    ChainOptions opt;
    opt.n_steps = spec.steps;
    opt.sigma = spec.proposal_fraction * box.range();
    opt.seed = derive_seed(config.seed, c);
    opt.adapt_steps = static_cast<std::int64_t>(spec.adapt_fraction * static_cast<double>(spec.steps));
    res.chains[c] = run_chain(Eigen::VectorXd(init), target, opt);
  });

  auto summary_json = [&](const PosteriorSummary& s) {
    json params = json::array();
    double worst_z = 0, worst_pct = 0;
    for (std::size_t i = 0; i < s.parameters.size(); ++i) {
      const auto& p = s.parameters[i];
      json e = {{"name", p.name}, {"mean", p.mean}, {"std", p.std},
                {"histogram", {{"lo", p.histogram.lo}, {"hi", p.histogram.hi}, {"mass", p.histogram.mass}}}};
      if (res.truth) {
        const double truth = (*res.truth)(static_cast<Eigen::Index>(i));
        const double err = std::abs(p.mean - truth);
        const double pct = truth != 0 ? 100.0 * err / std::abs(truth) : err;
        const double z = p.std > 0 ? err / p.std : (err == 0 ? 0.0 : INFINITY);
        e["truth"] = truth;
        e["recovery_error_percent"] = pct;
        e["z"] = std::isfinite(z) ? json(z) : json(nullptr);
        worst_z = std::max(worst_z, z);
        worst_pct = std::max(worst_pct, pct);
      }
      params.push_back(e);
    }
    json out = {{"acceptance_rate", s.acceptance_rate}, {"samples_used", s.samples_used},
                {"parameters", params}};
    if (res.truth) {
      out["worst_z"] = std::isfinite(worst_z) ? json(worst_z) : json(nullptr);
      out["worst_recovery_error_percent"] = worst_pct;
      out["within_3_std"] = worst_z <= 3.0;
    }
    return out;
  };

  json chains = json::array();
  for (std::size_t c = 0; c < res.chains.size(); ++c) {
    const Chain& ch = res.chains[c];
    res.summaries.push_back(summarize(ch, spec.burn_in, names, spec.histogram_bins));
    json j = summary_json(res.summaries.back());
    j["seed"] = ch.seed;
    j["acceptance_rate_after_tuning"] = ch.acceptance_rate(ch.adapt_steps);
    j["proposal_sigma"] = std::vector<double>(ch.sigma.data(), ch.sigma.data() + ch.sigma.size());
    chains.push_back(j);
  }
  res.report = {{"command", "estimate"},
                {"config_hash", config_hash(config)},
                {"seed", config.seed},
                {"synthetic", synthetic},
                {"runs", series.size()},
                {"observations", objective.observations()},
                {"gimbal_dropped", gimbal_dropped},
                {"sigma_noise", spec.sigma_noise},
                {"chains", chains}};
  if (spec.merge_chains) {
    res.pooled = summarize(res.chains, spec.burn_in, names, spec.histogram_bins);
    res.report["pooled"] = summary_json(*res.pooled);
  }
  return res;
}

}  // namespace glider
