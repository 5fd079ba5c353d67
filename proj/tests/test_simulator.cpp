#include "glider/control/glider_controller.hpp"
#include "glider/model/params.hpp"
#include "glider/sim/disturbance.hpp"
#include "glider/sim/integrator.hpp"
#include "glider/sim/metrics.hpp"
#include "glider/sim/simulate.hpp"

#include <doctest.h>

#include <sstream>

using namespace glider;

namespace {

ScheduleController constant_schedule(double gamma, double delta_rs, double m_b) {
  ControlCommand c{gamma, delta_rs, m_b, ControlMode::kOpenLoop};
  return ScheduleController({{0.0, c}});
}

std::string csv_of(const Trajectory& t) {
  std::ostringstream ss;
  write_trajectory_csv(ss, t);
  return ss.str();
}

}  // namespace

TEST_CASE("rk4 leaves an equilibrium untouched") {
  const auto p = default_vehicle_params();
  const VehicleState<double> s;
  const auto next = rk4_step(s, ActuatorState<double>{}, p, Vec6<double>::Zero(), 0.001);
  CHECK(next.vector() == s.vector());
}

TEST_CASE("rk4 integrates constant acceleration exactly") {
  const double a = 0.7, dt = 0.01;
  auto f = [a](const Eigen::Vector2d& x) -> Eigen::Vector2d { return {x(1), a}; };
  Eigen::Vector2d x(0, 0);
  const int n = 1000;
  for (int k = 0; k < n; ++k) x = rk4_step(x, f, dt);
  const double t = n * dt;
  CHECK(x(0) == doctest::Approx(0.5 * a * t * t).epsilon(1e-12));
  CHECK(x(1) == doctest::Approx(a * t).epsilon(1e-12));
}

TEST_CASE("rk4 is fourth order on the glider plant") {
  const auto p = default_vehicle_params();
  VehicleState<double> s0;
  s0.nu = {0.3, 0.0, 0.02, 0.05, -0.05, 0.02};
  const auto act = make_actuators(p, 0.4, 0.02, 0.08);
  auto endpoint = [&](double dt) {
    VehicleState<double> s = s0;
    const int n = static_cast<int>(std::lround(10.0 / dt));
    for (int k = 0; k < n; ++k) s = rk4_step(s, act, p, Vec6<double>::Zero(), dt);
    return s.vector();
  };
  const Vec12<double> ref = endpoint(0.0025);
  const double e1 = (endpoint(0.04) - ref).norm();
  const double e2 = (endpoint(0.02) - ref).norm();
  const double order = std::log2(e1 / e2);
  MESSAGE("rk4 error ratio " << e1 / e2 << ", order " << order);
  CHECK(order >= 3.5);
}

TEST_CASE("rk4 stamps divergence") {
  auto p = default_vehicle_params();
  VehicleState<double> s;
  s.nu.u = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(rk4_step(s, ActuatorState<double>{}, p, Vec6<double>::Zero(), 0.001, 2.5), DivergenceError);
}

TEST_CASE("disturbance samples") {
  Rng rng(1);
  DisturbanceSpec quiet;
  for (int i = 0; i < 100; ++i) CHECK(sample_disturbance(rng, quiet).isZero(0));

  DisturbanceSpec spec;
  spec.sigma = (Vec6<double>() << 0.1, 0.2, 0.3, 0.5, 1.0, 2.0).finished();
  const int n = 100000;
  Vec6<double> sum = Vec6<double>::Zero(), sum_sq = Vec6<double>::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec6<double> x = sample_disturbance(rng, spec);
    sum += x;
    sum_sq += x.cwiseProduct(x);
  }
  for (int j = 0; j < 6; ++j) {
    const double mean = sum(j) / n;
    const double sd = std::sqrt(sum_sq(j) / n - mean * mean);
    CHECK(std::abs(mean) < 4 * spec.sigma(j) / std::sqrt(double(n)));
    CHECK(std::abs(sd / spec.sigma(j) - 1) < 0.02);
  }

  Rng a(42), b(42);
  for (int i = 0; i < 50; ++i) CHECK(sample_disturbance(a, spec) == sample_disturbance(b, spec));
}

TEST_CASE("disturbance process holds each draw for one period") {
  DisturbanceSpec spec;
  spec.sigma.setConstant(1.0);
  DisturbanceProcess proc(spec, 0.001, 9);
  CHECK(proc.hold_steps() == 100);
  const Vec6<double> first = proc.at_step(0);
  for (int k = 1; k < 100; ++k) CHECK(proc.at_step(k) == first);
  CHECK(proc.at_step(100) != first);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}

TEST_CASE("simulate: equilibrium start stays put") {
  const auto p = default_vehicle_params();
  SimConfig cfg;
  cfg.duration = 20;
  auto ctl = constant_schedule(0, 0, 0);
  const auto traj = simulate(cfg, p, ctl);
  REQUIRE(traj.samples.size() == 201);
  for (const auto& s : traj.samples) CHECK(s.state.vector().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("simulate: heavy vehicle sinks monotonically") {
  const auto p = default_vehicle_params();
  SimConfig cfg;
  cfg.duration = 60;
  auto ctl = constant_schedule(0, 0, 0.1);
  const auto traj = simulate(cfg, p, ctl);
  double prev = -1;
  for (const auto& s : traj.samples) {
    if (s.t < 5) continue;
    CHECK(s.state.pose.z > prev);
    prev = s.state.pose.z;
  }
  CHECK(prev > 1.0);
}

TEST_CASE("simulate: determinism, clamping and CSV round trip") {
  const auto p = default_vehicle_params();
  SimConfig cfg;
  cfg.duration = 30;
  cfg.disturbance.sigma.setConstant(0.8);
  cfg.seed = 17;
  auto run = [&] {
    GliderControllerConfig cc;
    cc.roll = {20, 1};
    GliderController ctl(p, cc);
    ctl.set_pitch_target(0.7);
    ctl.set_depth_target(3.0);
    ctl.set_roll_target(0.3);
    return simulate(cfg, p, ctl);
  };
  const auto a = run();
  const auto b = run();
  CHECK(csv_of(a) == csv_of(b));
  for (const auto& s : a.samples) {
    CHECK(std::abs(s.act.gamma) <= p.limits.gamma_max);
    CHECK(std::abs(s.act.delta_rs) <= p.limits.delta_rs_max);
    CHECK(std::abs(s.act.m_b) <= p.limits.m_b_max);
  }
  std::istringstream in(csv_of(a));
  const auto back = read_trajectory_csv(in);
  REQUIRE(back.samples.size() == a.samples.size());
  CHECK(back.samples.back().state.pose.z == doctest::Approx(a.samples.back().state.pose.z).epsilon(1e-8));
  CHECK(csv_of(back) == csv_of(a));

  cfg.seed = 18;
  CHECK(csv_of(run()) != csv_of(a));
}

TEST_CASE("trajectory CSV rejects a wrong header") {
  std::istringstream in("t,x,y\n0,1,2\n");
  CHECK_THROWS_AS(read_trajectory_csv(in), ValidationError);
}

TEST_CASE("clamp_command") {
  ActuatorLimits lim;
  ControlCommand c{2.0, -0.2, 0.1};
  CHECK(clamp_command(c, lim));
  CHECK(c.gamma == lim.gamma_max);
  CHECK(c.delta_rs == -lim.delta_rs_max);
  CHECK(c.m_b == 0.1);
  CHECK_FALSE(clamp_command(c, lim));
}

TEST_CASE("simulate validates its config") {
  SimConfig cfg;
  cfg.dt = -1;
  CHECK_FALSE(validate(cfg).empty());
  auto ctl = constant_schedule(0, 0, 0);
  CHECK_THROWS_AS(simulate(cfg, default_vehicle_params(), ctl), ValidationError);
}

namespace {

Trajectory synthetic_trajectory(const std::function<std::pair<double, double>(double)>& y_ref, int n,
                                double dt) {
  Trajectory t;
  for (int k = 0; k < n; ++k) {
    TrajectorySample s;
    s.t = k * dt;
    auto [y, ref] = y_ref(s.t);
    s.state.angles.theta = y;
    s.refs.theta = ref;
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace

TEST_CASE("tracking metrics") {
  auto exact = synthetic_trajectory([](double t) { return std::pair{std::sin(t), std::sin(t)}; }, 100, 0.1);
  auto m = compute_metrics(exact, Channel::kPitch, 1.0);
  CHECK(m.rms_error == 0);
  CHECK(m.mean_abs_error == 0);
  CHECK(m.percent_error_of_target == 0);

  auto offset = synthetic_trajectory([](double) { return std::pair{11.0, 10.0}; }, 100, 0.1);
  m = compute_metrics(offset, Channel::kPitch, 10.0);
  CHECK(m.percent_error_of_target == doctest::Approx(10.0));
  CHECK(m.final_error == doctest::Approx(1.0));

  const double A = 0.3, w = 2 * std::numbers::pi / 5;
  auto sine = synthetic_trajectory([&](double t) { return std::pair{A * std::sin(w * t), 0.0}; }, 10001, 0.01);
  m = compute_metrics(sine, Channel::kPitch, 1.0);
  CHECK(std::abs(m.rms_error / (A / std::sqrt(2.0)) - 1) < 0.01);

  CHECK_THROWS_AS(compute_metrics(Trajectory{}, Channel::kPitch, 1.0), ValidationError);
  CHECK_THROWS_AS(compute_metrics(exact, Channel::kDepth, 1.0), ValidationError);
}
