#include "glider/cli/scenario.hpp"

#include "glider/errors.hpp"
#include "glider/model/params.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace glider {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Reads the members of one JSON object, collecting type errors and, on
// finish(), every key that was never asked for.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& problems)
      : obj_(obj), path_(std::move(path)), problems_(problems) {
    if (!obj_.is_object()) problem(path_, "must be an object");
  }

  bool has(const char* key) const { return obj_.is_object() && obj_.contains(key); }

  const json* find(const char* key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    return &obj_.at(key);
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_number()) out = v->get<double>();
      else problem(at(key), "must be a number");
    }
  }

  void degrees(const char* key, double& out_rad) {
    double deg = out_rad / kDeg;
    number(key, deg);
    out_rad = deg * kDeg;
  }

  void optional_number(const char* key, std::optional<double>& out, double scale = 1.0) {
    if (const json* v = find(key)) {
      if (v->is_number()) out = v->get<double>() * scale;
      else if (!v->is_null()) problem(at(key), "must be a number or null");
    }
  }

  template <typename Int> void integer(const char* key, Int& out) {
    if (const json* v = find(key)) {
      if (v->is_number_integer() || v->is_number_unsigned()) out = v->get<Int>();
      else problem(at(key), "must be an integer");
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else problem(at(key), "must be true or false");
    }
  }

  void string(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else problem(at(key), "must be a string");
    }
  }

  void numbers(const char* key, std::vector<double>& out, double scale = 1.0) {
    if (const json* v = find(key)) {
      if (!v->is_array()) {
        problem(at(key), "must be an array of numbers");
        return;
      }
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) {
          problem(at(key), "must be an array of numbers");
          return;
        }
        out.push_back(e.get<double>() * scale);
      }
    }
  }

  template <int N> void vector(const char* key, Eigen::Matrix<double, N, 1>& out) {
    if (!has(key)) {
      seen_.insert(key);
      return;
    }
    std::vector<double> values;
    numbers(key, values);
    if (values.size() != static_cast<std::size_t>(N)) {
      problem(at(key), "must have " + std::to_string(N) + " entries");
      return;
    }
    for (int i = 0; i < N; ++i) out(i) = values[static_cast<std::size_t>(i)];
  }

  std::optional<Reader> child(const char* key) {
    if (const json* v = find(key)) return Reader(*v, at(key), problems_);
    return std::nullopt;
  }

  void finish() {
    if (!obj_.is_object()) return;
    for (const auto& [k, _] : obj_.items())
      if (!seen_.count(k)) problem(at(k.c_str()), "unknown key");
  }

  std::string at(const char* key) const {
    if (*key == '\0') return path_;
    return path_.empty() ? key : path_ + "." + key;
  }
  void problem(const std::string& where, const std::string& what) {
    problems_.push_back(where + ": " + what);
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void read_nlc(Reader& r, NlcChannelConfig& c) {
  r.number("k1", c.k1);
  r.number("k3", c.k3);
  r.number("epsilon", c.epsilon);
  r.number("k2_margin", c.k2_margin);
  r.number("k2_floor", c.k2_floor);
  r.number("k2_window_s", c.k2_window_s);
  r.finish();
}

void read_pid(Reader& r, PidGains& g) {
  r.number("kp", g.kp);
  r.number("ki", g.ki);
  r.number("kd", g.kd);
  r.number("integrator_limit", g.integrator_limit);
  r.number("derivative_tau", g.derivative_tau);
  r.finish();
  if (g.kp < 0 || g.ki < 0 || g.kd < 0 || g.integrator_limit < 0 || g.derivative_tau < 0)
    r.problem(r.at(""), "PID gains, integrator limit and derivative_tau must be >= 0");
}

void read_filter(Reader& r, FilterConfig& f) {
  r.number("omega_n", f.omega_n);
  r.number("zeta", f.zeta);
  r.finish();
  if (!(f.omega_n > 0) || !(f.zeta > 0)) r.problem(r.at(""), "omega_n and zeta must be > 0");
}

void read_controller(Reader& r, GliderControllerConfig& c) {
  std::string strategy;
  r.string("strategy", strategy);
  if (!strategy.empty()) {
    if (strategy == "nlc") c.strategy = Strategy::kNlc;
    else if (strategy == "pid") c.strategy = Strategy::kPid;
    else if (strategy == "hybrid") c.strategy = Strategy::kHybrid;
    else r.problem(r.at("strategy"), "must be nlc, pid or hybrid");
  }
  if (auto s = r.child("pitch_nlc")) read_nlc(*s, c.pitch_nlc);
  if (auto s = r.child("depth_nlc")) read_nlc(*s, c.depth_nlc);
  if (auto s = r.child("pitch_pid")) read_pid(*s, c.pitch_pid);
  if (auto s = r.child("depth_pid")) read_pid(*s, c.depth_pid);
  if (auto s = r.child("roll")) {
    s->number("kp", c.roll.kp);
    s->number("kd", c.roll.kd);
    s->finish();
  }
  if (auto s = r.child("pitch_filter")) read_filter(*s, c.pitch_filter);
  if (auto s = r.child("depth_filter")) read_filter(*s, c.depth_filter);
  if (auto s = r.child("roll_filter")) read_filter(*s, c.roll_filter);
  if (auto s = r.child("hybrid")) {
    s->number("threshold", c.hybrid.threshold);
    s->number("hysteresis", c.hybrid.hysteresis);
    s->number("window_s", c.hybrid.window_s);
    s->number("transition_fraction", c.hybrid.transition_fraction);
    s->number("transition_abs", c.hybrid.transition_abs);
    s->finish();
  }
  r.finish();
  for (const auto* n : {&c.pitch_nlc, &c.depth_nlc}) {
    if (!(n->k1 > 0) || !(n->k3 > 0)) r.problem(r.at("*_nlc"), "k1 and k3 must be > 0");
    if (!(n->epsilon > 0 && n->epsilon < 1)) r.problem(r.at("*_nlc"), "epsilon must be in (0, 1)");
    if (!(n->k2_margin >= 1) || n->k2_floor < 0 || !(n->k2_window_s > 0))
      r.problem(r.at("*_nlc"), "k2_margin >= 1, k2_floor >= 0 and k2_window_s > 0 required");
  }
  if (!(c.hybrid.threshold > 0)) r.problem(r.at("hybrid.threshold"), "must be > 0");
  if (!(c.hybrid.hysteresis >= 0 && c.hybrid.hysteresis < 1))
    r.problem(r.at("hybrid.hysteresis"), "must be in [0, 1)");
}

void read_state(Reader& r, VehicleState<double>& s) {
  Vec3<double> pose(s.pose.x, s.pose.y, s.pose.z);
  Vec3<double> ang(s.angles.phi / kDeg, s.angles.theta / kDeg, s.angles.psi / kDeg);
  Vec6<double> nu = s.nu.vector();
  r.vector<3>("pose", pose);
  r.vector<3>("angles_deg", ang);
  r.vector<6>("nu", nu);
  r.finish();
  s.pose = {pose(0), pose(1), pose(2)};
  s.angles = {ang(0) * kDeg, ang(1) * kDeg, ang(2) * kDeg};
  s.nu = BodyVelocity<double>::from_vector(nu);
}

void read_estimate(Reader& r, EstimateSpec& e, const std::string& base_dir) {
  r.integer("chains", e.chains);
  r.integer("steps", e.steps);
  r.number("burn_in", e.burn_in);
  r.number("adapt_fraction", e.adapt_fraction);
  r.number("sigma_noise", e.sigma_noise);
  r.number("proposal_fraction", e.proposal_fraction);
  r.boolean("merge_chains", e.merge_chains);
  r.integer("histogram_bins", e.histogram_bins);
  r.vector<12>("prior_lo", e.prior.lo);
  r.vector<12>("prior_hi", e.prior.hi);
  r.vector<6>("weights", e.weights);
  r.integer("smoothing_window", e.differentiation.smoothing_window);
  r.number("max_jitter", e.differentiation.max_jitter);
  std::string route;
  r.string("route", route);
  if (route == "accelerations") e.route = EstimateRoute::kAccelerations;
  else if (route == "mocap") e.route = EstimateRoute::kMocap;
  else if (!route.empty()) r.problem(r.at("route"), "must be accelerations or mocap");
  std::string init;
  r.string("init", init);
  if (init == "prior") e.init = ChainInit::kPrior;
  else if (init == "truth") e.init = ChainInit::kTruth;
  else if (init == "least_squares") e.init = ChainInit::kLeastSquares;
  else if (!init.empty()) r.problem(r.at("init"), "must be prior, truth or least_squares");
  r.boolean("write_corpus", e.write_corpus);
  std::string dataset;
  r.string("dataset", dataset);
  if (!dataset.empty()) e.dataset = (fs::path(base_dir) / dataset).lexically_normal().string();
  if (auto c = r.child("corpus")) {
    c->numbers("ballast_levels", e.corpus.ballast_levels);
    c->numbers("sliding_levels", e.corpus.sliding_levels);
    c->numbers("servo_levels", e.corpus.servo_levels);
    c->number("duration", e.corpus.duration);
    c->number("sample_rate_hz", e.corpus.sample_rate_hz);
    c->boolean("dive_then_climb", e.corpus.dive_then_climb);
    c->number("initial_rate_std", e.corpus.initial_rate_std);
    c->vector<6>("accel_noise", e.corpus.accel_noise);
    c->integer("seed", e.corpus.seed);
    c->finish();
    if (!(e.corpus.duration > 0) || !(e.corpus.sample_rate_hz > 0))
      c->problem(r.at("corpus"), "duration and sample_rate_hz must be > 0");
    if ((e.corpus.accel_noise.array() < 0).any())
      c->problem(r.at("corpus.accel_noise"), "must be >= 0");
  }
  r.finish();
  if (e.chains < 1) r.problem(r.at("chains"), "must be >= 1");
  if (e.steps < 1) r.problem(r.at("steps"), "must be >= 1");
  if (!(e.burn_in >= 0 && e.burn_in < 1)) r.problem(r.at("burn_in"), "must be in [0, 1)");
  if (!(e.adapt_fraction >= 0 && e.adapt_fraction <= e.burn_in))
    r.problem(r.at("adapt_fraction"), "must be in [0, burn_in]");
  if (!(e.sigma_noise > 0)) r.problem(r.at("sigma_noise"), "must be > 0");
  if (!(e.proposal_fraction > 0)) r.problem(r.at("proposal_fraction"), "must be > 0");
  if (e.histogram_bins < 1) r.problem(r.at("histogram_bins"), "must be >= 1");
  if ((e.weights.array() < 0).any()) r.problem(r.at("weights"), "must be >= 0");
  for (const auto& p : validate(e.prior)) r.problem(r.at("prior"), p);
}

}  // namespace

GliderControllerConfig default_controller_config() {
  GliderControllerConfig c;
  c.strategy = Strategy::kNlc;
  c.roll = {20.0, 1.0};
  // Triple real pole at 1 rad/s for θ̈ ≈ |C| Δr_s with |C| ≈ 20 s⁻² m⁻¹.
  c.pitch_pid = {0.15, 0.05, 0.15, 1.0, 0.2};
  // Triple real pole at 0.3 rad/s for Z̈ ≈ (g/m_t) m_b.
  c.depth_pid = {0.36, 0.036, 1.2, 5.0, 0.2};
  return c;
}

CompareSpec default_compare_spec() {
  CompareSpec c;
  c.pitch_targets = {10 * kDeg, -10 * kDeg, 30 * kDeg, -30 * kDeg, 45 * kDeg, -45 * kDeg};
  c.depth_targets = {0.0, 2.0, 4.0, 5.0};
  c.sigma_levels = {0.0, 0.3};
  return c;
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.vehicle = default_vehicle_params();
  c.controller = default_controller_config();
  c.compare = default_compare_spec();
  c.sim.duration = 60.0;
  c.source = json::object({{"schema_version", kSchemaVersion}});
  return c;
}

ScenarioConfig parse_scenario(const json& doc, const std::string& base_dir) {
  ScenarioConfig c = default_scenario();
  c.source = doc;
  std::vector<std::string> problems;
  Reader root(doc, "", problems);
  if (!root.has("schema_version")) {
    problems.emplace_back("schema_version: missing (expected " + std::to_string(kSchemaVersion) + ")");
  }
  root.integer("schema_version", c.schema_version);
  if (c.schema_version != kSchemaVersion)
    problems.push_back("schema_version: unsupported version " + std::to_string(c.schema_version));

  std::string vehicle;
  root.string("vehicle", vehicle);
  if (!vehicle.empty()) {
    c.vehicle_file = (fs::path(base_dir) / vehicle).lexically_normal().string();
    try {
      c.vehicle = load_vehicle_params(*c.vehicle_file);
    } catch (const ValidationError& e) {
      for (const auto& p : e.problems()) problems.push_back("vehicle: " + p);
    }
  }
  root.integer("seed", c.seed);

  if (auto s = root.child("simulation")) {
    s->number("dt", c.sim.dt);
    s->number("duration", c.sim.duration);
    s->number("control_rate_hz", c.sim.control_rate_hz);
    s->integer("log_decimation", c.sim.log_decimation);
    if (auto i = s->child("initial_state")) read_state(*i, c.sim.initial_state);
    if (auto a = s->child("initial_actuators")) {
      double g = c.sim.initial_actuators.gamma;
      a->degrees("gamma_deg", g);
      c.sim.initial_actuators.gamma = g;
      a->number("delta_rs", c.sim.initial_actuators.delta_rs);
      a->number("m_b", c.sim.initial_actuators.m_b);
      a->finish();
    }
    s->finish();
  }
  if (auto d = root.child("disturbance")) {
    d->vector<6>("sigma", c.sim.disturbance.sigma);
    d->number("rate_hz", c.sim.disturbance.rate_hz);
    d->finish();
  }
  if (auto r = root.child("controller")) read_controller(*r, c.controller);
  c.controller.control_dt = 1.0 / c.sim.control_rate_hz;

  if (const json* sp = root.find("setpoints")) {
    if (!sp->is_array()) {
      problems.emplace_back("setpoints: must be an array");
    } else {
      double last_t = -1;
      for (std::size_t i = 0; i < sp->size(); ++i) {
        Reader e((*sp)[i], "setpoints[" + std::to_string(i) + "]", problems);
        SetpointEvent ev;
        e.number("t", ev.t);
        e.optional_number("theta_deg", ev.theta, kDeg);
        e.optional_number("z", ev.z);
        e.optional_number("phi_deg", ev.phi, kDeg);
        e.optional_number("ballast", ev.ballast);
        e.optional_number("delta_rs", ev.delta_rs);
        e.finish();
        if (ev.t < last_t) e.problem(e.at("t"), "setpoint times must be non-decreasing");
        if (ev.theta && ev.delta_rs) e.problem(e.at("delta_rs"), "conflicts with theta_deg");
        if (ev.z && ev.ballast) e.problem(e.at("ballast"), "conflicts with z");
        last_t = ev.t;
        c.setpoints.push_back(ev);
      }
    }
  }
  if (auto e = root.child("envelope")) {
    DepthEnvelope env;
    e->number("z_min", env.z_min);
    e->number("z_max", env.z_max);
    e->finish();
    if (!(env.z_min < env.z_max)) e->problem("envelope", "z_min must be < z_max");
    c.envelope = env;
  }
  if (auto m = root.child("compare")) {
    m->numbers("pitch_targets_deg", c.compare.pitch_targets, kDeg);
    m->numbers("depth_targets", c.compare.depth_targets);
    m->numbers("sigma_levels", c.compare.sigma_levels);
    m->number("pitch_duration", c.compare.pitch_duration);
    m->number("depth_duration", c.compare.depth_duration);
    m->number("glide_ballast", c.compare.glide_ballast);
    m->boolean("write_trajectories", c.compare.write_trajectories);
    m->finish();
    for (double s : c.compare.sigma_levels)
      if (s < 0) m->problem("compare.sigma_levels", "must be >= 0");
    if (!(c.compare.pitch_duration > 0) || !(c.compare.depth_duration > 0))
      m->problem("compare", "durations must be > 0");
  }
  if (auto m = root.child("maneuver")) {
    std::string pattern;
    m->string("pattern", pattern);
    if (!pattern.empty()) {
      try {
        c.maneuver.pattern = parse_pattern(pattern);
      } catch (const ValidationError& e) {
        problems.push_back("maneuver.pattern: " + e.problems().front());
      }
    }
    m->integer("cycles", c.maneuver.cycles);
    m->degrees("roll_deg", c.maneuver.roll);
    m->degrees("glide_pitch_deg", c.maneuver.glide_pitch);
    m->number("ballast", c.maneuver.ballast);
    m->number("dive_depth", c.maneuver.dive_depth);
    m->number("climb_depth", c.maneuver.climb_depth);
    m->number("start_depth", c.maneuver.start_depth);
    m->number("max_duration", c.maneuver.max_duration);
    m->finish();
    for (const auto& p : validate(c.maneuver)) problems.push_back(p);
  }
  if (auto e = root.child("estimate")) read_estimate(*e, c.estimate, base_dir);
  root.finish();

  for (const auto& p : validate(c.sim)) problems.push_back(p);
  for (const auto& p : validate(c.vehicle)) problems.push_back("vehicle: " + p);
  if (!problems.empty()) throw ValidationError(problems);
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return parse_scenario(doc, fs::path(path).parent_path().string().empty()
                                 ? "."
                                 : fs::path(path).parent_path().string());
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ScenarioConfig& config) {
  json doc = config.source;
  doc["seed"] = config.seed;
  std::ostringstream vehicle;
  write_vehicle_params(vehicle, config.vehicle);
  return fnv1a_hex(doc.dump() + '\n' + vehicle.str());
}

}  // namespace glider
