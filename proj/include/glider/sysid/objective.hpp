#pragma once

/**
 * @file objective.hpp
 * @brief Acceleration-residual objective and posterior for the hydrodynamic
 *        coefficients.
 *
 * Parameter order is HydroCoefficients::kNames:
 * kd0 kd kl0 kl kbeta kmr kp km0 km kq kmy kr.
 */

#include "glider/model/types.hpp"
#include "glider/sysid/differentiate.hpp"

#include <span>
#include <vector>

namespace glider {

using ParameterVector = Eigen::Matrix<double, 12, 1>;

/// Uniform prior support: lo ≤ τ ≤ hi elementwise.
struct PriorBox {
  ParameterVector lo;
  ParameterVector hi;
  bool contains(const ParameterVector& tau) const;
  ParameterVector range() const { return hi - lo; }
};

/// Signed bounds that bracket the shipped defaults with kd0 > 0.
PriorBox default_prior_box();
std::vector<std::string> validate(const PriorBox& box);

/**
 * Σ over samples of (ν̇_obs − ν̇(τ))ᵀ diag(w) (ν̇_obs − ν̇(τ)), with ν̇(τ) the
 * model acceleration at the observed state. Masses and inertia come from
 * `fixed`; its hydro coefficients are ignored.
 */
double residual_objective(const ParameterVector& tau, std::span<const DerivedStateSeries> series,
                          const VehicleParams<double>& fixed,
                          const Vec6<double>& weights = Vec6<double>::Ones());

/**
 * The same objective expanded as τᵀHτ − 2bᵀτ + c. Acceleration is affine in
 * τ, so the expansion is exact and costs O(144) per evaluation.
 */
class QuadraticObjective {
 public:
  static QuadraticObjective build(std::span<const DerivedStateSeries> series,
                                  const VehicleParams<double>& fixed,
                                  const Vec6<double>& weights = Vec6<double>::Ones());

  double operator()(const ParameterVector& tau) const;
  /// Minimizer of the unconstrained objective (H τ = b).
  ParameterVector least_squares() const;

  const Eigen::Matrix<double, 12, 12>& H() const { return H_; }
  const ParameterVector& b() const { return b_; }
  double c() const { return c_; }
  std::size_t observations() const { return n_; }

 private:
  Eigen::Matrix<double, 12, 12> H_{Eigen::Matrix<double, 12, 12>::Zero()};
  ParameterVector b_{ParameterVector::Zero()};
  double c_{0};
  std::size_t n_{0};
};

/// log Π = −f/(2σ²) inside the box, −∞ outside.
double log_target(double objective_value, bool in_domain, double sigma_noise);

template <typename Objective>
double log_target(const ParameterVector& tau, const Objective& f, const PriorBox& box,
                  double sigma_noise) {
  if (!box.contains(tau)) return log_target(0.0, false, sigma_noise);
  return log_target(f(tau), true, sigma_noise);
}

}  // namespace glider
