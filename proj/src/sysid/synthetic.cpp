#include "glider/sysid/synthetic.hpp"

#include "glider/errors.hpp"
#include "glider/model/dynamics.hpp"
#include "glider/sim/disturbance.hpp"
#include "glider/sim/simulate.hpp"

#include <cmath>
#include <cstdio>

namespace glider {

namespace {

constexpr double kPlantDt = 0.001;

SyntheticRun simulate_run(const VehicleParams<double>& truth, const CorpusSpec& spec,
                          std::size_t index, double ballast, double sliding, double servo) {
  const auto& lim = truth.limits;
  std::vector<ScheduleController::Step> steps;
  std::vector<ScheduleEntry> schedule;
  auto add = [&](double t, double sign) {
    ControlCommand c{servo * lim.gamma_max, sign * sliding * lim.delta_rs_max,
                     sign * ballast * lim.m_b_max, ControlMode::kOpenLoop};
    steps.push_back({t, c});
    schedule.push_back({t, c.gamma, c.delta_rs, c.m_b});
  };
  add(0.0, 1.0);
  if (spec.dive_then_climb) add(0.5 * spec.duration, -1.0);

  Rng rng(derive_seed(spec.seed, index));
  std::normal_distribution<double> n01(0.0, 1.0);

  SimConfig cfg;
  cfg.dt = kPlantDt;
  cfg.duration = spec.duration;
  cfg.log_decimation = static_cast<int>(std::lround(1.0 / (spec.sample_rate_hz * kPlantDt)));
  cfg.initial_state.nu.p = spec.initial_rate_std * n01(rng);
  cfg.initial_state.nu.q = spec.initial_rate_std * n01(rng);
  cfg.initial_state.nu.r = spec.initial_rate_std * n01(rng);
  cfg.initial_actuators = make_actuators(truth, steps.front().command.gamma,
                                         steps.front().command.delta_rs, steps.front().command.m_b);
  ScheduleController schedule_ctl(steps);
  const Trajectory traj = simulate(cfg, truth, schedule_ctl);

  SyntheticRun out;
  char name[32];
  std::snprintf(name, sizeof name, "run_%03zu", index);
  out.mocap.name = name;
  out.mocap.schedule = schedule;
  out.series.run = name;
  for (const auto& s : traj.samples) {
    out.mocap.samples.push_back({s.t, s.state.pose, s.state.angles});
    DerivedSample d;
    d.t = s.t;
    d.state = s.state;
    d.act = s.act;
    d.nu_dot = body_acceleration(s.state, s.act, truth);
    for (int k = 0; k < 6; ++k) d.nu_dot(k) += spec.accel_noise(k) * n01(rng);
    out.series.samples.push_back(d);
  }
  return out;
}

}  // namespace

std::vector<SyntheticRun> generate_corpus(const VehicleParams<double>& truth,
                                          const CorpusSpec& spec) {
  if (!(spec.duration > 0) || !(spec.sample_rate_hz > 0))
    throw ValidationError("corpus duration and sample rate must be > 0");
  const double steps_per_sample = 1.0 / (spec.sample_rate_hz * kPlantDt);
  if (std::abs(steps_per_sample - std::round(steps_per_sample)) > 1e-9)
    throw ValidationError("corpus sample rate must divide the 1 kHz plant rate");
  std::vector<SyntheticRun> corpus;
  std::size_t index = 0;
  for (double b : spec.ballast_levels)
    for (double s : spec.sliding_levels)
      for (double g : spec.servo_levels) corpus.push_back(simulate_run(truth, spec, index++, b, s, g));
  return corpus;
}

MocapDataset to_dataset(const std::vector<SyntheticRun>& corpus) {
  MocapDataset ds;
  for (const auto& r : corpus) ds.runs.push_back(r.mocap);
  return ds;
}

std::vector<DerivedStateSeries> to_series(const std::vector<SyntheticRun>& corpus) {
  std::vector<DerivedStateSeries> out;
  for (const auto& r : corpus) out.push_back(r.series);
  return out;
}

}  // namespace glider
