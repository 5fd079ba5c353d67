#pragma once

/**
 * @file mcmc.hpp
 * @brief Metropolis-Hastings with a diagonal Gaussian random-walk kernel.
 */

#include "glider/sim/disturbance.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace glider {

/// τ_new = τ + ξ with ξ ~ N(0, diag(σ²)).
Eigen::VectorXd propose(const Eigen::VectorXd& current, const Eigen::VectorXd& sigma, Rng& rng);

/// log Q(to | from) of the random-walk kernel; symmetric in (to, from).
double log_proposal_density(const Eigen::VectorXd& to, const Eigen::VectorXd& from,
                            const Eigen::VectorXd& sigma);

/// min(1, exp(log Π_new − log Π_cur + log Q_back − log Q_fwd)); 0 when Π_new = 0.
double acceptance_probability(double log_target_new, double log_target_cur, double log_q_forward,
                              double log_q_backward);

struct ChainOptions {
  std::int64_t n_steps{50000};
  Eigen::VectorXd sigma;
  std::uint64_t seed{1};
  /// Steps at the start during which σ is tuned; σ is frozen afterwards. 0 = no tuning.
  std::int64_t adapt_steps{0};
  double target_acceptance{0.25};
  std::int64_t adapt_interval{100};
};

struct Chain {
  /// One row per step: the state after that step.
  Eigen::MatrixXd samples;
  Eigen::VectorXd log_target;
  std::vector<std::uint8_t> accepted;
  Eigen::VectorXd sigma_initial;
  /// σ used after tuning ended.
  Eigen::VectorXd sigma;
  std::uint64_t seed{0};
  std::int64_t adapt_steps{0};

  std::int64_t size() const { return samples.rows(); }
  double acceptance_rate(std::int64_t from = 0) const;
};

namespace detail {

/// Tunes σ = scale · shape during the adaptation phase. The scale follows the
/// acceptance rate per interval; the shape is reset to the per-coordinate
/// spread of the chain at each quarter of the phase.
class SigmaTuner {
 public:
  SigmaTuner(const Eigen::VectorXd& sigma, const ChainOptions& options);
  /// Call after each step; returns true when σ changed.
  bool observe(std::int64_t step, const Eigen::VectorXd& x, bool accepted);
  Eigen::VectorXd sigma() const { return scale_ * shape_; }

 private:
  const ChainOptions* options_;
  Eigen::VectorXd shape_;
  double scale_{1.0};
  std::int64_t accepted_in_interval_{0};
  std::int64_t rounds_{0};
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
  std::int64_t count_{0};
};

}  // namespace detail

/**
 * Runs a chain on any callable `double log_target(const Eigen::VectorXd&)`.
 * Proposals with log Π = −∞ are always rejected. Deterministic for a seed.
 */
template <typename LogTarget>
Chain run_chain(const Eigen::VectorXd& init, const LogTarget& log_target,
                const ChainOptions& options) {
  const auto d = init.size();
  Chain chain;
  chain.samples.resize(options.n_steps, d);
  chain.log_target.resize(options.n_steps);
  chain.accepted.resize(static_cast<std::size_t>(options.n_steps));
  chain.sigma_initial = options.sigma;
  chain.seed = options.seed;
  chain.adapt_steps = options.adapt_steps;

  Rng rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  detail::SigmaTuner tuner(options.sigma, options);
  Eigen::VectorXd sigma = options.sigma;
  Eigen::VectorXd current = init;
  double lt_current = log_target(current);

  for (std::int64_t k = 0; k < options.n_steps; ++k) {
    const Eigen::VectorXd candidate = propose(current, sigma, rng);
    const double lt_candidate = log_target(candidate);
    const double ap = acceptance_probability(lt_candidate, lt_current,
                                             log_proposal_density(candidate, current, sigma),
                                             log_proposal_density(current, candidate, sigma));
    const bool accept = unif(rng) < ap;
    if (accept) {
      current = candidate;
      lt_current = lt_candidate;
    }
    chain.samples.row(k) = current.transpose();
    chain.log_target(k) = lt_current;
    chain.accepted[static_cast<std::size_t>(k)] = accept ? 1 : 0;
    if (k < options.adapt_steps && tuner.observe(k, current, accept)) sigma = tuner.sigma();
  }
  chain.sigma = sigma;
  return chain;
}

struct Histogram {
  double lo{0};
  double hi{0};
  /// Fraction of samples per equal-width bin; sums to 1.
  std::vector<double> mass;
};

struct ParameterSummary {
  std::string name;
  double mean{0};
  double std{0};
  Histogram histogram;
};

struct PosteriorSummary {
  std::vector<ParameterSummary> parameters;
  double acceptance_rate{0};
  std::int64_t samples_used{0};
};

/**
 * Statistics over the samples after the first burn_in_fraction of the chain;
 * the acceptance rate covers the whole chain. Throws when nothing is left.
 */
PosteriorSummary summarize(const Chain& chain, double burn_in_fraction,
                           const std::vector<std::string>& names = {}, int bins = 30);
/// Pools the post-burn-in samples of several chains.
PosteriorSummary summarize(const std::vector<Chain>& chains, double burn_in_fraction,
                           const std::vector<std::string>& names = {}, int bins = 30);

/// One row per step: parameter columns, then log_target and accepted.
void write_chain_csv(std::ostream& out, const Chain& chain, const std::vector<std::string>& names);
/// Plain-text table of name, mean and std per parameter.
void write_summary(std::ostream& out, const PosteriorSummary& summary);

}  // namespace glider
