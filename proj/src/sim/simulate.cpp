#include "glider/sim/simulate.hpp"

#include "glider/errors.hpp"
#include "glider/model/dynamics.hpp"
#include "glider/sim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace glider {

std::vector<std::string> validate(const SimConfig& c) {
  std::vector<std::string> problems;
  if (!(c.dt > 0)) problems.emplace_back("sim.dt must be > 0");
  if (!(c.duration >= c.dt)) problems.emplace_back("sim.duration must be >= dt");
  if (!(c.control_rate_hz > 0)) problems.emplace_back("sim.control_rate_hz must be > 0");
  if (c.log_decimation < 1) problems.emplace_back("sim.log_decimation must be >= 1");
  if (!(c.disturbance.rate_hz > 0)) problems.emplace_back("disturbance.rate_hz must be > 0");
  if ((c.disturbance.sigma.array() < 0).any())
    problems.emplace_back("disturbance.sigma must be >= 0");
  auto is_multiple = [&](double rate) {
    if (!(rate > 0) || !(c.dt > 0)) return true;
    const double steps = 1.0 / (rate * c.dt);
    return std::llround(steps) >= 1 &&
           std::abs(steps - static_cast<double>(std::llround(steps))) <= 1e-6 * steps;
  };
  if (!is_multiple(c.disturbance.rate_hz))
    problems.emplace_back("disturbance period must be an integer multiple of dt");
  if (!is_multiple(c.control_rate_hz))
    problems.emplace_back("control period must be an integer multiple of dt");
  if (!c.initial_state.vector().allFinite()) problems.emplace_back("initial state must be finite");
  return problems;
}

bool clamp_command(ControlCommand& cmd, const ActuatorLimits& limits) {
  bool moved = false;
  auto clamp = [&](double& v, double lim) {
    const double c = std::clamp(v, -lim, lim);
    if (c != v) moved = true;
    v = c;
  };
  clamp(cmd.gamma, limits.gamma_max);
  clamp(cmd.delta_rs, limits.delta_rs_max);
  clamp(cmd.m_b, limits.m_b_max);
  return moved;
}

Trajectory simulate(const SimConfig& config, const VehicleParams<double>& params,
                    Controller& controller, const EnvelopeCheck& envelope,
                    const TickObserver& observer) {
  if (auto problems = validate(config); !problems.empty()) throw ValidationError(problems);

  const std::int64_t n_steps = std::llround(config.duration / config.dt);
  const std::int64_t control_every = std::llround(1.0 / (config.control_rate_hz * config.dt));
  DisturbanceProcess disturbance(config.disturbance, config.dt, config.seed);

  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(n_steps / config.log_decimation + 2));
  VehicleState<double> state = config.initial_state;
  const auto& a0 = config.initial_actuators;
  ActuatorState<double> act = make_actuators(params, a0.gamma, a0.delta_rs, a0.m_b);
  ControlOutput last;
  last.command = {act.gamma, act.delta_rs, act.m_b, ControlMode::kOpenLoop};

  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    bool done = k == n_steps;
    if (k % control_every == 0) {
      last = controller.update(t, state, act);
      if (clamp_command(last.command, params.limits)) ++traj.clamp_events;
      act = make_actuators(params, last.command.gamma, last.command.delta_rs, last.command.m_b);
      if (observer) observer(t, state, last);
      done = done || controller.finished();
    }
    if (k % config.log_decimation == 0 || done) {
      traj.samples.push_back({t, state, act, last.command, last.refs});
    }
    if (done) break;
    if (envelope) {
      if (auto reason = envelope(t, state)) {
        if (traj.samples.back().t != t) traj.samples.push_back({t, state, act, last.command, last.refs});
        traj.abort_reason = *reason;
        break;
      }
    }
    state = rk4_step(state, act, params, disturbance.at_step(k), config.dt, t);
  }
  return traj;
}

ScheduleController::ScheduleController(std::vector<Step> steps) : steps_(std::move(steps)) {
  std::stable_sort(steps_.begin(), steps_.end(),
                   [](const Step& a, const Step& b) { return a.t < b.t; });
}

ControlOutput ScheduleController::update(double t, const VehicleState<double>&,
                                         const ActuatorState<double>& act) {
  ControlOutput out;
  out.command = {act.gamma, act.delta_rs, act.m_b, ControlMode::kOpenLoop};
  for (const auto& s : steps_) {
    if (s.t > t) break;
    out.command = s.command;
    out.command.mode = ControlMode::kOpenLoop;
  }
  return out;
}

namespace {
void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out << buf;
}
}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : traj.samples) {
    const auto x = s.state.vector();
    put(out, s.t);
    for (int i = 0; i < 12; ++i) {
      out << ',';
      put(out, x(i));
    }
    for (double v : {s.act.gamma, s.act.delta_rs, s.act.m_b, s.refs.theta, s.refs.z, s.refs.phi}) {
      out << ',';
      put(out, v);
    }
    out << ',' << to_string(s.command.mode) << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_trajectory_csv(out, traj);
  if (!out) throw IoError("write failed: " + path);
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw ValidationError("trajectory CSV: unexpected header");
  Trajectory traj;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 20)
      throw ValidationError("trajectory CSV row " + std::to_string(row) + ": expected 20 columns");
    double v[19];
    for (int i = 0; i < 19; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(cells[static_cast<std::size_t>(i)].c_str(), &end);
      if (end == cells[static_cast<std::size_t>(i)].c_str() || *end != '\0')
        throw ValidationError("trajectory CSV row " + std::to_string(row) + ": bad number");
    }
    TrajectorySample s;
    s.t = v[0];
    Vec12<double> x;
    for (int i = 0; i < 12; ++i) x(i) = v[1 + i];
    s.state = VehicleState<double>::from_vector(x);
    s.act.gamma = v[13];
    s.act.delta_rs = v[14];
    s.act.m_b = v[15];
    s.refs = {v[16], v[17], v[18]};
    const std::string& mode = cells[19];
    if (mode == "NLC") s.command.mode = ControlMode::kNlc;
    else if (mode == "PID") s.command.mode = ControlMode::kPid;
    else if (mode == "OPEN") s.command.mode = ControlMode::kOpenLoop;
    else throw ValidationError("trajectory CSV row " + std::to_string(row) + ": bad mode");
    s.command.gamma = s.act.gamma;
    s.command.delta_rs = s.act.delta_rs;
    s.command.m_b = s.act.m_b;
    if (!traj.samples.empty() && !(s.t > traj.samples.back().t))
      throw ValidationError("trajectory CSV row " + std::to_string(row) + ": time not increasing");
    traj.samples.push_back(s);
  }
  return traj;
}

}  // namespace glider
