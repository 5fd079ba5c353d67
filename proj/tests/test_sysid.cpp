#include "glider/model/params.hpp"
#include "glider/sysid/differentiate.hpp"
#include "glider/sysid/mcmc.hpp"
#include "glider/sysid/mocap.hpp"
#include "glider/sysid/objective.hpp"
#include "glider/sysid/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace glider;

namespace {

MocapRun run_from(const std::function<MocapSample(double)>& pose, int n, double h) {
  MocapRun run;
  run.name = "probe";
  for (int i = 0; i < n; ++i) run.samples.push_back(pose(i * h));
  run.schedule = {{0.0, 0.1, 0.01, 0.05}};
  return run;
}

CorpusSpec small_corpus(double noise) {
  CorpusSpec c;
  c.ballast_levels = {1.0, 0.4};
  c.sliding_levels = {1.0, 0.3};
  c.servo_levels = {1.0, 0.5};
  c.duration = 30;
  c.accel_noise.setConstant(noise);
  return c;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

}  // namespace

TEST_CASE("mocap parsing") {
  std::istringstream ok("t,x,y,z,phi,theta,psi\n0,0,0,1,0,0,0\n0.05,0.01,0,1,0,0,0\n0.1,0.02,0,1,0,0,0\n");
  const auto s = read_mocap(ok);
  CHECK(s.size() == 3);
  CHECK(s[1].pose.x == 0.01);

  std::istringstream bad("t,x,y,z,phi,theta,psi\n0,0,0,1,0,0,0\n0.1,0,0,1,0,0,0\n0.05,0,0,1,0,0,0\n");
  try {
    read_mocap(bad, "bad.csv");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(e.problems().size() == 1);
    CHECK(e.problems()[0].find("row 4") != std::string::npos);
    CHECK(e.problems()[0].find("not increasing") != std::string::npos);
  }

  std::istringstream header("t,x,y\n0,0,0\n");
  CHECK_THROWS_AS(read_mocap(header), ValidationError);
  std::istringstream nan("t,x,y,z,phi,theta,psi\n0,nan,0,1,0,0,0\n");
  CHECK_THROWS_AS(read_mocap(nan), ValidationError);
}

TEST_CASE("schedule step-hold lookup") {
  MocapRun r;
  r.schedule = {{1.0, 0.1, 0, 0}, {2.0, 0.2, 0, 0}};
  CHECK(r.schedule_at(0.0).gamma == 0.1);
  CHECK(r.schedule_at(1.5).gamma == 0.1);
  CHECK(r.schedule_at(2.0).gamma == 0.2);
  CHECK(r.schedule_at(9.0).gamma == 0.2);
}

TEST_CASE("mocap dataset round trip and directory loading") {
  auto corpus = generate_corpus(default_vehicle_params(), small_corpus(0.0));
  corpus.resize(2);
  const auto ds = to_dataset(corpus);
  const auto dir = std::filesystem::temp_directory_path() / "glider_mocap_roundtrip";
  std::filesystem::remove_all(dir);
  write_mocap_dataset(dir.string(), ds);
  const auto back = load_mocap(dir.string());
  REQUIRE(back.runs.size() == 2);
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(back.runs[r].name == ds.runs[r].name);
    REQUIRE(back.runs[r].samples.size() == ds.runs[r].samples.size());
    double worst = 0;
    for (std::size_t i = 0; i < ds.runs[r].samples.size(); ++i) {
      const auto& a = ds.runs[r].samples[i];
      const auto& b = back.runs[r].samples[i];
      worst = std::max({worst, std::abs(a.t - b.t), std::abs(a.pose.z - b.pose.z),
                        std::abs(a.angles.psi - b.angles.psi)});
    }
    CHECK(worst < 1e-9);
    CHECK(back.runs[r].schedule.size() == ds.runs[r].schedule.size());
  }
  CHECK_THROWS_AS(load_mocap((dir / "missing").string()), IoError);
  std::filesystem::remove(dir / (ds.runs[0].name + ".actuators.csv"));
  CHECK_THROWS_AS(load_mocap(dir.string()), GliderError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("differentiation helpers") {
  CHECK(central_difference(0, 0, 1, 1, 3, 9) == doctest::Approx(2.0));  // f = t², f'(1) = 2
  const auto u = unwrap_angles({3.0, -3.1, -2.9, 3.1});
  CHECK(u[1] == doctest::Approx(-3.1 + 2 * std::numbers::pi));
  CHECK(u[2] == doctest::Approx(-2.9 + 2 * std::numbers::pi));
  CHECK(u[3] == doctest::Approx(3.1));
  const auto m = moving_average({1, 2, 3, 10, 5}, 3);
  CHECK(m[0] == 1);
  CHECK(m[1] == doctest::Approx(2));
  CHECK(m[2] == doctest::Approx(5));
  CHECK(m[4] == 5);
  CHECK_THROWS_AS(moving_average({1, 2, 3}, 2), ValidationError);
}

TEST_CASE("differentiate: linear and quadratic motion") {
  const auto p = default_vehicle_params();
  const double a = 0.37, c = 0.2;
  const auto lin = differentiate(run_from([&](double t) {
    MocapSample s;
    s.t = t;
    s.pose.x = a * t;
    return s;
  }, 60, 0.05), p);
  REQUIRE(!lin.samples.empty());
  for (const auto& s : lin.samples) {
    CHECK(std::abs(s.state.nu.u - a) < 1e-9);
    CHECK(s.nu_dot.cwiseAbs().maxCoeff() < 1e-9);
  }
  const auto quad = differentiate(run_from([&](double t) {
    MocapSample s;
    s.t = t;
    s.pose.z = 0.5 * c * t * t;
    return s;
  }, 60, 0.05), p, {1, 0.05});
  for (const auto& s : quad.samples) CHECK(std::abs(s.nu_dot(2) - c) < 1e-6);
  CHECK(quad.samples.front().act.gamma == 0.1);
}

TEST_CASE("differentiate: sinusoid attenuation follows the truncation formula") {
  const auto p = default_vehicle_params();
  const double A = 0.5, w = 2.0, h = 0.05;
  for (int window : {1, 5}) {
    const auto d = differentiate(run_from([&](double t) {
      MocapSample s;
      s.t = t;
      s.pose.x = A * std::sin(w * t);
      return s;
    }, 400, h), p, {window, 0.05});
    const double diff = std::sin(w * h) / (w * h);
    const double avg = std::sin(window * w * h / 2) / (window * std::sin(w * h / 2));
    for (const auto& s : d.samples) {
      const double exact_u = A * w * std::cos(w * s.t);
      CHECK(std::abs(s.state.nu.u - avg * diff * exact_u) < 1e-9);
      // O(h²) bound without averaging: |1 − sin(x)/x| ≤ x²/6.
      if (window == 1) CHECK(std::abs(s.state.nu.u - exact_u) <= A * w * (w * h) * (w * h) / 6 + 1e-12);
      const double exact_acc = -A * w * w * std::sin(w * s.t);
      CHECK(std::abs(s.nu_dot(0) - avg * diff * diff * exact_acc) < 1e-8);
    }
  }
}

TEST_CASE("differentiate rejects irregular sampling") {
  auto run = run_from([](double t) { MocapSample s; s.t = t; return s; }, 20, 0.05);
  run.samples[10].t += 0.02;
  CHECK_THROWS_AS(differentiate(run, default_vehicle_params()), ValidationError);
}

TEST_CASE("objective: self-consistency and quadratic structure") {
  const auto truth = default_vehicle_params();
  const auto corpus = generate_corpus(truth, small_corpus(0.0));
  const auto series = to_series(corpus);
  const ParameterVector tau = truth.hydro.vector();
  CHECK(residual_objective(tau, series, truth) < 1e-10);
  const auto q = QuadraticObjective::build(series, truth);
  CHECK(q(tau) < 1e-10);
  CHECK((q.least_squares() - tau).norm() < 1e-6 * tau.norm());

  for (int j = 0; j < 12; ++j) {
    ParameterVector bumped = tau;
    bumped(j) += 0.05 * (1 + std::abs(tau(j)));
    const double f = residual_objective(bumped, series, truth);
    CHECK(f > residual_objective(tau, series, truth));
    CHECK(q(bumped) == doctest::Approx(f).epsilon(1e-8));

    // Three-point parabola through K_j = k0 − d, k0, k0 + d predicts a fourth point.
    auto at = [&](double kj) {
      ParameterVector x = tau;
      x(j) = kj;
      x(0) += 0.3;  // move off the minimum so the curvature term is not alone
      return residual_objective(x, series, truth);
    };
    const double k0 = tau(j), d = 0.5;
    const double f0 = at(k0 - d), f1 = at(k0), f2 = at(k0 + d);
    const double a2 = (f0 - 2 * f1 + f2) / (2 * d * d), a1 = (f2 - f0) / (2 * d);
    const double x = 1.7;
    const double predicted = f1 + a1 * x + a2 * x * x;
    CHECK(std::abs(at(k0 + x) - predicted) < 1e-8 * (1 + std::abs(predicted)));
  }
}

TEST_CASE("log target") {
  const PriorBox box = default_prior_box();
  CHECK(validate(box).empty());
  const auto truth = default_vehicle_params().hydro.vector();
  CHECK(box.contains(truth));
  auto f = [](const ParameterVector& x) { return x.squaredNorm(); };
  ParameterVector out = truth;
  out(0) = box.hi(0) + 1;
  CHECK(log_target(out, f, box, 0.1) == -std::numeric_limits<double>::infinity());

  ParameterVector a = truth, b = truth;
  b(1) = -b(1) + 2 * box.lo(1) + 100;  // any other point; only equality of f matters below
  auto flat = [](const ParameterVector&) { return 3.0; };
  CHECK(log_target(a, flat, box, 0.1) == log_target(truth, flat, box, 0.1));

  const double sigma = 0.7;
  ParameterVector c = truth;
  c(3) += 1.0;
  const double ratio = std::exp(log_target(c, f, box, sigma) - log_target(truth, f, box, sigma));
  CHECK(ratio == doctest::Approx(std::exp(-(f(c) - f(truth)) / (2 * sigma * sigma))).epsilon(1e-12));
  CHECK(log_target(1.0, true, 2.0) == doctest::Approx(-1.0 / 8));
}

TEST_CASE("proposal kernel") {
  Rng rng(4);
  Eigen::VectorXd x(3);
  x << 1, -2, 3;
  const Eigen::VectorXd tiny = Eigen::VectorXd::Constant(3, 1e-15);
  CHECK((propose(x, tiny, rng) - x).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXd sigma(3);
  sigma << 0.1, 1.0, 5.0;
  Eigen::VectorXd y(3);
  y << 0.5, 0.5, 0.5;
  CHECK(log_proposal_density(x, y, sigma) == doctest::Approx(log_proposal_density(y, x, sigma)));

  const int n = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3), sq = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd d = propose(x, sigma, rng) - x;
    sum += d;
    sq += d.cwiseProduct(d);
  }
  for (int j = 0; j < 3; ++j) {
    const double mean = sum(j) / n;
    CHECK(std::abs(std::sqrt(sq(j) / n - mean * mean) / sigma(j) - 1) < 0.02);
  }
}

TEST_CASE("acceptance probability") {
  CHECK(acceptance_probability(-1.0, -2.0, 0.3, 0.3) == 1.0);
  CHECK(acceptance_probability(-2.0, -2.0, 0.3, 0.3) == 1.0);
  CHECK(acceptance_probability(std::log(0.5), 0.0, -1.2, -1.2) == doctest::Approx(0.5));
  CHECK(acceptance_probability(-std::numeric_limits<double>::infinity(), 0.0, 0, 0) == 0.0);
  CHECK(acceptance_probability(0.0, -std::numeric_limits<double>::infinity(), 0, 0) == 1.0);
  // An asymmetric kernel enters through the Q ratio.
  CHECK(acceptance_probability(0.0, 0.0, std::log(2.0), std::log(1.0)) == doctest::Approx(0.5));
}

TEST_CASE("chain: forced rejection, determinism, normal target") {
  auto box_target = [](const Eigen::VectorXd& x) {
    return std::abs(x(0)) <= 1 ? 0.0 : -std::numeric_limits<double>::infinity();
  };
  ChainOptions one;
  one.n_steps = 1;
  one.sigma = Eigen::VectorXd::Constant(1, 1e6);
  Eigen::VectorXd init = Eigen::VectorXd::Constant(1, 0.25);
  const Chain c1 = run_chain(init, box_target, one);
  REQUIRE(c1.size() == 1);
  CHECK(c1.samples(0, 0) == 0.25);
  CHECK(c1.accepted[0] == 0);

  auto normal = [](const Eigen::VectorXd& x) { return -0.5 * x.squaredNorm(); };
  ChainOptions opt;
  opt.n_steps = 100000;
  opt.sigma = Eigen::VectorXd::Constant(1, 2.4);
  opt.seed = 77;
  const Chain a = run_chain(Eigen::VectorXd::Zero(1), normal, opt);
  const Chain b = run_chain(Eigen::VectorXd::Zero(1), normal, opt);
  CHECK(a.samples == b.samples);
  CHECK(a.accepted == b.accepted);

  std::vector<double> xs(a.samples.data(), a.samples.data() + a.size());
  const double ks = ks_statistic(xs);
  MESSAGE("KS statistic " << ks << ", acceptance " << a.acceptance_rate());
  CHECK(ks < 0.02);

  const auto s = summarize(a, 0.1, {"x"});
  CHECK(std::abs(s.parameters[0].mean) < 0.02);
  CHECK(std::abs(s.parameters[0].std - 1) < 0.02);
  double mass = 0;
  for (double m : s.parameters[0].histogram.mass) mass += m;
  CHECK(std::abs(mass - 1) < 1e-12);
}

TEST_CASE("adaptive proposal settles near the target acceptance") {
  auto narrow = [](const Eigen::VectorXd& x) { return -0.5 * (x.array() / 0.01).square().sum(); };
  ChainOptions opt;
  opt.n_steps = 40000;
  opt.sigma = Eigen::VectorXd::Constant(4, 1.0);
  opt.adapt_steps = 10000;
  const Chain c = run_chain(Eigen::VectorXd::Zero(4), narrow, opt);
  const double rate = c.acceptance_rate(opt.adapt_steps);
  CHECK(rate > 0.1);
  CHECK(rate < 0.6);
  CHECK(c.sigma.maxCoeff() < 0.1);
  CHECK(c.sigma_initial(0) == 1.0);
}

TEST_CASE("summaries") {
  Chain c;
  c.samples = Eigen::MatrixXd::Constant(100, 2, 1.5);
  c.log_target = Eigen::VectorXd::Zero(100);
  c.accepted.assign(100, 0);
  const auto s = summarize(c, 0.2, {"a", "b"}, 7);
  CHECK(s.samples_used == 80);
  CHECK(s.parameters[1].mean == 1.5);
  CHECK(s.parameters[1].std == 0);
  double mass = 0;
  for (double m : s.parameters[0].histogram.mass) mass += m;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  const auto pooled = summarize(std::vector<Chain>{c, c}, 0.2, {"a", "b"});
  CHECK(pooled.samples_used == 160);

  std::ostringstream csv;
  write_chain_csv(csv, c, {"a", "b"});
  CHECK(csv.str().rfind("a,b,log_target,accepted\n", 0) == 0);
  std::ostringstream txt;
  write_summary(txt, s);
  CHECK(txt.str().find("a,") != std::string::npos);
}

TEST_CASE("synthetic corpus follows the excitation grid") {
  const auto spec = CorpusSpec{};
  CHECK(spec.ballast_levels.size() * spec.sliding_levels.size() * spec.servo_levels.size() == 45);
  auto small = small_corpus(0.01);
  const auto corpus = generate_corpus(default_vehicle_params(), small);
  REQUIRE(corpus.size() == 8);
  CHECK(corpus[0].mocap.name == "run_000");
  CHECK(corpus[0].mocap.samples.size() == static_cast<std::size_t>(small.duration * small.sample_rate_hz) + 1);
  // First and second halves fly opposite ballast signs.
  const auto& sched = corpus[0].mocap.schedule;
  CHECK(sched.front().m_b * sched.back().m_b < 0);
  const auto again = generate_corpus(default_vehicle_params(), small);
  CHECK(again[3].series.samples[10].nu_dot == corpus[3].series.samples[10].nu_dot);
}
