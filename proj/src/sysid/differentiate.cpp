#include "glider/sysid/differentiate.hpp"

#include "glider/errors.hpp"
#include "glider/model/dynamics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace glider {

double central_difference(double t0, double f0, double t1, double f1, double t2, double f2) {
  const double h1 = t1 - t0;
  const double h2 = t2 - t1;
  return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
}

std::vector<double> unwrap_angles(const std::vector<double>& angles) {
  std::vector<double> out(angles);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double offset = 0;
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const double jump = angles[i] - angles[i - 1];
    offset -= two_pi * std::round(jump / two_pi);
    out[i] = angles[i] + offset;
  }
  return out;
}

std::vector<double> moving_average(const std::vector<double>& x, int window) {
  if (window < 1 || window % 2 == 0) throw ValidationError("smoothing window must be odd and >= 1");
  const std::size_t half = static_cast<std::size_t>(window / 2);
  std::vector<double> out(x);
  if (x.size() < static_cast<std::size_t>(window)) return out;
  for (std::size_t i = half; i + half < x.size(); ++i) {
    double sum = 0;
    for (std::size_t j = i - half; j <= i + half; ++j) sum += x[j];
    out[i] = sum / window;
  }
  return out;
}

DerivedStateSeries differentiate(const MocapRun& run, const VehicleParams<double>& params,
                                 const DifferentiationOptions& options) {
  const auto& s = run.samples;
  const std::size_t n = s.size();
  const std::size_t half = static_cast<std::size_t>(std::max(options.smoothing_window, 1) / 2);
  if (n < 2 * half + 5)
    throw ValidationError("run '" + run.name + "' too short to differentiate: " +
                          std::to_string(n) + " samples");

  const double mean_dt = (s.back().t - s.front().t) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = s[i].t - s[i - 1].t;
    if (std::abs(dt - mean_dt) > options.max_jitter * mean_dt)
      throw ValidationError("run '" + run.name + "': sample spacing jitter beyond " +
                            std::to_string(options.max_jitter * 100) + "% at row " +
                            std::to_string(i + 2));
  }

  std::array<std::vector<double>, 6> ch;
  for (auto& c : ch) c.resize(n);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = s[i].t;
    ch[0][i] = s[i].pose.x;
    ch[1][i] = s[i].pose.y;
    ch[2][i] = s[i].pose.z;
    ch[3][i] = s[i].angles.phi;
    ch[4][i] = s[i].angles.theta;
    ch[5][i] = s[i].angles.psi;
  }
  ch[5] = unwrap_angles(ch[5]);
  for (auto& c : ch) c = moving_average(c, options.smoothing_window);

  // Velocities at [half + 1, n − half − 2].
  std::vector<std::optional<VehicleState<double>>> vel(n);
  DerivedStateSeries out;
  out.run = run.name;
  for (std::size_t i = half + 1; i + half + 1 < n; ++i) {
    Vec6<double> rate;
    for (int k = 0; k < 6; ++k)
      rate(k) = central_difference(t[i - 1], ch[k][i - 1], t[i], ch[k][i], t[i + 1], ch[k][i + 1]);
    VehicleState<double> st;
    st.pose = {ch[0][i], ch[1][i], ch[2][i]};
    st.angles = {ch[3][i], ch[4][i], ch[5][i]};
    try {
      const Vec3<double> pqr =
          body_rates_from_euler_rates(st.angles, Vec3<double>(rate.tail<3>()), options.gimbal_margin);
      const Vec3<double> uvw = rotation_inertial_to_body(st.angles).transpose() * rate.head<3>();
      Vec6<double> nu;
      nu << uvw, pqr;
      st.nu = BodyVelocity<double>::from_vector(nu);
      vel[i] = st;
    } catch (const GimbalLockError&) {
      ++out.gimbal_dropped;
    }
  }

  for (std::size_t i = half + 2; i + half + 2 < n; ++i) {
    if (!vel[i - 1] || !vel[i] || !vel[i + 1]) continue;
    const Vec6<double> a = vel[i - 1]->nu.vector();
    const Vec6<double> b = vel[i]->nu.vector();
    const Vec6<double> c = vel[i + 1]->nu.vector();
    DerivedSample d;
    d.t = t[i];
    d.state = *vel[i];
    for (int k = 0; k < 6; ++k)
      d.nu_dot(k) = central_difference(t[i - 1], a(k), t[i], b(k), t[i + 1], c(k));
    const auto& e = run.schedule_at(t[i]);
    d.act = make_actuators(params, e.gamma, e.delta_rs, e.m_b);
    out.samples.push_back(d);
  }
  return out;
}

}  // namespace glider
