#include "glider/model/params.hpp"

#include "glider/errors.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace glider {

SpheroidAddedMass spheroid_added_mass_factors(double length, double diameter) {
  const double a = 0.5 * length, b = 0.5 * diameter;
  const double e = std::sqrt(1.0 - (b * b) / (a * a));
  const double e2 = e * e, e3 = e2 * e;
  const double log_term = std::log((1.0 + e) / (1.0 - e));
  const double alpha0 = 2.0 * (1.0 - e2) / e3 * (0.5 * log_term - e);
  const double beta0 = 1.0 / e2 - (1.0 - e2) / (2.0 * e3) * log_term;
  const double d = beta0 - alpha0;
  return {alpha0 / (2.0 - alpha0), beta0 / (2.0 - beta0),
          e2 * e2 * d / ((2.0 - e2) * (2.0 * e2 - (2.0 - e2) * d))};
}

Mat6<double> spheroid_inertia(double mass, double length, double diameter, double fluid_density) {
  const double a = 0.5 * length, b = 0.5 * diameter;
  const double fluid_mass = fluid_density * 4.0 / 3.0 * M_PI * a * b * b;
  const SpheroidAddedMass k = spheroid_added_mass_factors(length, diameter);
  const double i_axial = 0.4 * mass * b * b;
  const double i_trans = 0.2 * mass * (a * a + b * b);
  const double i_trans_fluid = 0.2 * fluid_mass * (a * a + b * b);
  Vec6<double> diag;
  diag << mass + k.k1 * fluid_mass, mass + k.k2 * fluid_mass, mass + k.k2 * fluid_mass, i_axial,
      i_trans + k.k_rot * i_trans_fluid, i_trans + k.k_rot * i_trans_fluid;
  return diag.asDiagonal();
}

HydroCoefficients<double> default_hydro_coefficients() {
  HydroCoefficients<double> k;
  k.kd0 = 3.0;
  k.kd = 20.0;
  k.kl0 = 0.5;
  k.kl = 50.0;
  k.kbeta = -20.0;
  k.kmr = -2.0;
  k.kp = -1.0;
  k.km0 = 0.2;
  k.km = -8.0;
  k.kq = -10.0;
  k.kmy = 8.0;
  k.kr = -10.0;
  return k;
}

namespace {
constexpr double kHullLength = 1.2;
constexpr double kHullDiameter = 0.144;
constexpr double kWingRollInertia = 0.02;
}  // namespace

VehicleParams<double> default_vehicle_params() {
  VehicleParams<double> p;
  p.mass.m_total = 13.0;
  p.mass.m_r = 1.0;
  p.mass.m_s = 2.0;
  p.mass.r_r = Vec3<double>(0.0, 0.0, 0.0);
  p.mass.r_s = Vec3<double>(0.0, 0.0, 0.005);
  p.mass.r_b = Vec3<double>(0.1, 0.0, 0.0);
  p.mass.rotary_radius = 0.02;
  p.mass.g = 9.81;

  Mat6<double> m = spheroid_inertia(p.mass.m_total, kHullLength, kHullDiameter);
  m.topLeftCorner<3, 3>() = p.mass.m_total * Mat3<double>::Identity();
  m(3, 3) += kWingRollInertia;
  p.inertia = InertiaModel<double>(m);

  p.hydro = default_hydro_coefficients();
  p.plunger_gain = 0.2;
  return p;
}

std::vector<std::string> validate(const VehicleParams<double>& p) {
  std::vector<std::string> problems;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  const auto& m = p.mass;
  need(m.m_total > 0, "mass.m_total must be > 0");
  need(m.m_r > 0, "mass.m_r must be > 0");
  need(m.m_s > 0, "mass.m_s must be > 0");
  need(m.g > 0, "mass.g must be > 0");
  need(m.rotary_radius >= 0 && m.rotary_radius <= 1.2, "mass.rotary_radius must be in [0, 1.2] m");
  for (const auto& [name, r] : {std::pair{"mass.r_r", m.r_r}, std::pair{"mass.r_s", m.r_s},
                                std::pair{"mass.r_b", m.r_b}}) {
    need(r.allFinite() && r.cwiseAbs().maxCoeff() <= 1.2,
         std::string(name) + " components must be finite and within 1.2 m");
  }
  const auto k = p.hydro.vector();
  need(k.allFinite(), "hydro coefficients must be finite");
  need(p.hydro.kd0 > 0, "hydro.kd0 must be > 0");
  need(p.inertia.Ixx() > 0 && p.inertia.Iyy() > 0 && p.inertia.Izz() > 0,
       "principal moments of inertia must be > 0");
  need(p.limits.gamma_max > 0 && p.limits.delta_rs_max > 0 && p.limits.m_b_max > 0,
       "actuator limits must be > 0");
  need(std::isfinite(p.plunger_gain), "plunger_gain must be finite");
  return problems;
}

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& where) {
  std::istringstream is(text);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(where + ": not a number: '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

VehicleParams<double> parse_vehicle_params(std::istream& in, const std::string& source) {
  VehicleParams<double> p = default_vehicle_params();
  Mat6<double> m = p.inertia.M();
  std::vector<std::string> problems;

  using Setter = std::function<void(const std::vector<double>&)>;
  std::map<std::string, std::pair<std::size_t, Setter>> keys;
  auto scalar = [&](const std::string& key, double& target) {
    keys[key] = {1, [&target](const std::vector<double>& v) { target = v[0]; }};
  };
  auto vec3 = [&](const std::string& key, Vec3<double>& target) {
    keys[key] = {3, [&target](const std::vector<double>& v) { target << v[0], v[1], v[2]; }};
  };
  scalar("mass.m_total", p.mass.m_total);
  scalar("mass.m_r", p.mass.m_r);
  scalar("mass.m_s", p.mass.m_s);
  vec3("mass.r_r", p.mass.r_r);
  vec3("mass.r_s", p.mass.r_s);
  vec3("mass.r_b", p.mass.r_b);
  scalar("mass.rotary_radius", p.mass.rotary_radius);
  scalar("mass.g", p.mass.g);
  keys["inertia.M"] = {36, [&m](const std::vector<double>& v) {
                         for (int i = 0; i < 36; ++i) m(i / 6, i % 6) = v[i];
                       }};
  keys["inertia.diagonal"] = {6, [&m](const std::vector<double>& v) {
                                m.setZero();
                                for (int i = 0; i < 6; ++i) m(i, i) = v[i];
                              }};
  scalar("hydro.kd0", p.hydro.kd0);
  scalar("hydro.kd", p.hydro.kd);
  scalar("hydro.kl0", p.hydro.kl0);
  scalar("hydro.kl", p.hydro.kl);
  scalar("hydro.kbeta", p.hydro.kbeta);
  scalar("hydro.kmr", p.hydro.kmr);
  scalar("hydro.kp", p.hydro.kp);
  scalar("hydro.km0", p.hydro.km0);
  scalar("hydro.km", p.hydro.km);
  scalar("hydro.kq", p.hydro.kq);
  scalar("hydro.kmy", p.hydro.kmy);
  scalar("hydro.kr", p.hydro.kr);
  scalar("limits.gamma_max", p.limits.gamma_max);
  scalar("limits.delta_rs_max", p.limits.delta_rs_max);
  scalar("limits.m_b_max", p.limits.m_b_max);
  scalar("plunger_gain", p.plunger_gain);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + ": expected 'key = value'");
      continue;
    }
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const auto it = keys.find(key);
    if (it == keys.end()) {
      problems.push_back(where + ": unknown key '" + key + "'");
      continue;
    }
    try {
      const auto values = parse_numbers(line.substr(eq + 1), where);
      if (values.size() != it->second.first) {
        problems.push_back(where + ": '" + key + "' expects " +
                           std::to_string(it->second.first) + " value(s), got " +
                           std::to_string(values.size()));
        continue;
      }
      it->second.second(values);
    } catch (const ValidationError& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) throw ValidationError(problems);
  try {
    p.inertia = InertiaModel<double>(m);
  } catch (const SingularInertiaError& e) {
    problems.push_back(source + ": " + e.what());
  }
  for (const auto& s : validate(p)) problems.push_back(source + ": " + s);
  if (!problems.empty()) throw ValidationError(problems);
  return p;
}

VehicleParams<double> load_vehicle_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open parameter file: " + path);
  return parse_vehicle_params(in, path);
}

void write_vehicle_params(std::ostream& out, const VehicleParams<double>& p) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  auto v3 = [&](const Vec3<double>& v) { out << v(0) << ' ' << v(1) << ' ' << v(2); };
  out << "# glider vehicle parameters (SI units)\n";
  out << "mass.m_total = " << p.mass.m_total << "        # kg\n";
  out << "mass.m_r = " << p.mass.m_r << "        # kg, rotary (roll) mass\n";
  out << "mass.m_s = " << p.mass.m_s << "        # kg, sliding (pitch) mass\n";
  out << "mass.r_r = ";
  v3(p.mass.r_r);
  out << "        # m, rotary-mass hub, body frame\n";
  out << "mass.r_s = ";
  v3(p.mass.r_s);
  out << "        # m, sliding mass at zero rail travel (x = r_sx0)\n";
  out << "mass.r_b = ";
  v3(p.mass.r_b);
  out << "        # m, ballast centroid with plunger at rest\n";
  out << "mass.rotary_radius = " << p.mass.rotary_radius << "        # m\n";
  out << "mass.g = " << p.mass.g << "        # m/s^2\n";
  out << "# generalized inertia, row major, kg and kg*m^2\n";
  out << "inertia.M =";
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) out << ' ' << p.inertia.M()(i, j);
  out << '\n';
  out << "# hydrodynamic coefficients, N*s^2/m^2 (forces) and N*m*s^2/m^2 (moments)\n";
  const auto k = p.hydro.vector();
  for (std::size_t i = 0; i < HydroCoefficients<double>::kCount; ++i) {
    out << "hydro." << HydroCoefficients<double>::kNames[i] << " = " << k(static_cast<int>(i))
        << '\n';
  }
  out << "limits.gamma_max = " << p.limits.gamma_max << "        # rad\n";
  out << "limits.delta_rs_max = " << p.limits.delta_rs_max << "        # m\n";
  out << "limits.m_b_max = " << p.limits.m_b_max << "        # kg\n";
  out << "plunger_gain = " << p.plunger_gain << "        # m/kg, delta_rb = plunger_gain * m_b\n";
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace glider
