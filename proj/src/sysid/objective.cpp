#include "glider/sysid/objective.hpp"

#include "glider/errors.hpp"
#include "glider/model/dynamics.hpp"
#include "glider/model/hydrodynamics.hpp"

#include <cmath>
#include <limits>

namespace glider {

namespace {
// Model acceleration split as a0 + J τ at one observed sample.
struct AffineAcceleration {
  Vec6<double> a0;
  Eigen::Matrix<double, 6, 12> J;
};

AffineAcceleration affine_acceleration(const DerivedSample& s, const VehicleParams<double>& fixed) {
  VehicleParams<double> no_hydro = fixed;
  no_hydro.hydro = HydroCoefficients<double>::from_vector(ParameterVector::Zero());
  return {body_acceleration(s.state, s.act, no_hydro),
          fixed.inertia.M_inv() * hydrodynamic_regressor(s.state.nu)};
}
}  // namespace

bool PriorBox::contains(const ParameterVector& tau) const {
  return (tau.array() >= lo.array()).all() && (tau.array() <= hi.array()).all();
}

PriorBox default_prior_box() {
  PriorBox box;
  //        kd0   kd    kl0    kl    kbeta  kmr   kp    km0   km    kq    kmy   kr
  box.lo << 0.0,  0.0,  -5.0,  0.0,  -60.0, -10.0, -5.0, -2.0, -30.0, -30.0, -10.0, -30.0;
  box.hi << 10.0, 60.0, 5.0,   150.0, 0.0,  10.0,  0.0,  2.0,  0.0,   0.0,   30.0,  0.0;
  return box;
}

std::vector<std::string> validate(const PriorBox& box) {
  std::vector<std::string> problems;
  for (int i = 0; i < 12; ++i) {
    if (!(box.lo(i) < box.hi(i)))
      problems.push_back("prior bounds for " + std::string(HydroCoefficients<double>::kNames[i]) +
                         " must satisfy lo < hi");
  }
  if (!(box.lo(0) >= 0)) problems.push_back("prior for kd0 must exclude negative drag");
  return problems;
}

double residual_objective(const ParameterVector& tau, std::span<const DerivedStateSeries> series,
                          const VehicleParams<double>& fixed, const Vec6<double>& weights) {
  VehicleParams<double> p = fixed;
  p.hydro = HydroCoefficients<double>::from_vector(tau);
  double sum = 0;
  for (const auto& run : series) {
    for (const auto& s : run.samples) {
      const Vec6<double> r = s.nu_dot - body_acceleration(s.state, s.act, p);
      sum += r.dot(weights.cwiseProduct(r));
    }
  }
  return sum;
}

QuadraticObjective QuadraticObjective::build(std::span<const DerivedStateSeries> series,
                                             const VehicleParams<double>& fixed,
                                             const Vec6<double>& weights) {
  QuadraticObjective q;
  const Eigen::DiagonalMatrix<double, 6> W(weights);
  for (const auto& run : series) {
    for (const auto& s : run.samples) {
      const auto [a0, J] = affine_acceleration(s, fixed);
      const Vec6<double> y = s.nu_dot - a0;
      q.H_.noalias() += J.transpose() * W * J;
      q.b_.noalias() += J.transpose() * (W * y);
      q.c_ += y.dot(W * y);
      ++q.n_;
    }
  }
  return q;
}

double QuadraticObjective::operator()(const ParameterVector& tau) const {
  return std::max(0.0, tau.dot(H_ * tau) - 2.0 * b_.dot(tau) + c_);
}

ParameterVector QuadraticObjective::least_squares() const {
  return H_.ldlt().solve(b_);
}

double log_target(double objective_value, bool in_domain, double sigma_noise) {
  if (!in_domain) return -std::numeric_limits<double>::infinity();
  return -objective_value / (2.0 * sigma_noise * sigma_noise);
}

}  // namespace glider
