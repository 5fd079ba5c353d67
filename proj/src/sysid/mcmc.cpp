#include "glider/sysid/mcmc.hpp"

#include "glider/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace glider {

Eigen::VectorXd propose(const Eigen::VectorXd& current, const Eigen::VectorXd& sigma, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::VectorXd out(current.size());
  for (Eigen::Index i = 0; i < current.size(); ++i) out(i) = current(i) + sigma(i) * n01(rng);
  return out;
}

double log_proposal_density(const Eigen::VectorXd& to, const Eigen::VectorXd& from,
                            const Eigen::VectorXd& sigma) {
  const double log_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double sum = 0;
  for (Eigen::Index i = 0; i < to.size(); ++i) {
    const double z = (to(i) - from(i)) / sigma(i);
    sum += -0.5 * z * z - std::log(sigma(i)) - log_sqrt_2pi;
  }
  return sum;
}

double acceptance_probability(double log_target_new, double log_target_cur, double log_q_forward,
                              double log_q_backward) {
  if (std::isinf(log_target_new) && log_target_new < 0) return 0.0;
  if (std::isinf(log_target_cur) && log_target_cur < 0) return 1.0;
  const double log_ratio = log_target_new - log_target_cur + log_q_backward - log_q_forward;
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0 ? 1.0 : std::exp(log_ratio);
}

double Chain::acceptance_rate(std::int64_t from) const {
  if (from >= size()) return 0.0;
  std::int64_t n = 0;
  for (std::int64_t k = from; k < size(); ++k) n += accepted[static_cast<std::size_t>(k)];
  return static_cast<double>(n) / static_cast<double>(size() - from);
}

namespace detail {

SigmaTuner::SigmaTuner(const Eigen::VectorXd& sigma, const ChainOptions& options)
    : options_(&options),
      shape_(sigma),
      mean_(Eigen::VectorXd::Zero(sigma.size())),
      m2_(Eigen::VectorXd::Zero(sigma.size())) {}

bool SigmaTuner::observe(std::int64_t step, const Eigen::VectorXd& x, bool accepted) {
  ++count_;
  const Eigen::VectorXd delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta.cwiseProduct(x - mean_);
  accepted_in_interval_ += accepted ? 1 : 0;

  const std::int64_t n = step + 1;
  bool changed = false;
  const std::int64_t quarter = std::max<std::int64_t>(options_->adapt_steps / 4, 1);
  if (n % quarter == 0 && n < options_->adapt_steps && count_ > 1) {
    const Eigen::VectorXd spread = (m2_ / static_cast<double>(count_ - 1)).cwiseSqrt();
    if ((spread.array() > 0).all()) {
      shape_ = spread;
      scale_ = 2.38 / std::sqrt(static_cast<double>(x.size()));
      rounds_ = 0;
    }
    mean_.setZero();
    m2_.setZero();
    count_ = 0;
    changed = true;
  }
  if (n % options_->adapt_interval == 0) {
    const double rate =
        static_cast<double>(accepted_in_interval_) / static_cast<double>(options_->adapt_interval);
    ++rounds_;
    scale_ *= std::exp((rate - options_->target_acceptance) * 3.0 / std::sqrt(rounds_));
    accepted_in_interval_ = 0;
    changed = true;
  }
  return changed;
}

}  // namespace detail

namespace {

PosteriorSummary summarize_rows(const std::vector<const Chain*>& chains, double burn_in_fraction,
                                const std::vector<std::string>& names, int bins) {
  if (!(burn_in_fraction >= 0 && burn_in_fraction < 1))
    throw ValidationError("burn-in fraction must be in [0, 1)");
  if (chains.empty()) throw ValidationError("no chains to summarize");
  const Eigen::Index d = chains.front()->samples.cols();
  std::vector<Eigen::VectorXd> rows;
  std::int64_t accepted = 0, total = 0;
  for (const Chain* c : chains) {
    const auto start = static_cast<std::int64_t>(std::floor(burn_in_fraction * c->size()));
    for (std::int64_t k = start; k < c->size(); ++k) rows.push_back(c->samples.row(k).transpose());
    for (auto a : c->accepted) accepted += a;
    total += c->size();
  }
  if (rows.empty()) throw ValidationError("no samples left after burn-in");

  PosteriorSummary out;
  out.acceptance_rate = total ? static_cast<double>(accepted) / static_cast<double>(total) : 0.0;
  out.samples_used = static_cast<std::int64_t>(rows.size());
  const double n = static_cast<double>(rows.size());
  for (Eigen::Index i = 0; i < d; ++i) {
    ParameterSummary p;
    p.name = i < static_cast<Eigen::Index>(names.size()) ? names[static_cast<std::size_t>(i)]
                                                         : "p" + std::to_string(i);
    double lo = rows.front()(i), hi = lo, sum = 0;
    for (const auto& r : rows) {
      lo = std::min(lo, r(i));
      hi = std::max(hi, r(i));
      sum += r(i);
    }
    p.mean = sum / n;
    double ss = 0;
    for (const auto& r : rows) ss += (r(i) - p.mean) * (r(i) - p.mean);
    p.std = rows.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;

    p.histogram.lo = lo;
    p.histogram.hi = hi;
    p.histogram.mass.assign(static_cast<std::size_t>(std::max(bins, 1)), 0.0);
    const double width = (hi - lo) / static_cast<double>(p.histogram.mass.size());
    for (const auto& r : rows) {
      std::size_t b = width > 0 ? static_cast<std::size_t>((r(i) - lo) / width) : 0;
      b = std::min(b, p.histogram.mass.size() - 1);
      p.histogram.mass[b] += 1.0 / n;
    }
    out.parameters.push_back(std::move(p));
  }
  return out;
}

}  // namespace

PosteriorSummary summarize(const Chain& chain, double burn_in_fraction,
                           const std::vector<std::string>& names, int bins) {
  return summarize_rows({&chain}, burn_in_fraction, names, bins);
}

PosteriorSummary summarize(const std::vector<Chain>& chains, double burn_in_fraction,
                           const std::vector<std::string>& names, int bins) {
  std::vector<const Chain*> ptrs;
  for (const auto& c : chains) ptrs.push_back(&c);
  return summarize_rows(ptrs, burn_in_fraction, names, bins);
}

void write_chain_csv(std::ostream& out, const Chain& chain, const std::vector<std::string>& names) {
  for (const auto& n : names) out << n << ',';
  out << "log_target,accepted\n";
  char buf[40];
  for (std::int64_t k = 0; k < chain.size(); ++k) {
    for (Eigen::Index i = 0; i < chain.samples.cols(); ++i) {
      std::snprintf(buf, sizeof buf, "%.9g,", chain.samples(k, i));
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.9g,", chain.log_target(k));
    out << buf << static_cast<int>(chain.accepted[static_cast<std::size_t>(k)]) << '\n';
  }
}

void write_summary(std::ostream& out, const PosteriorSummary& summary) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "acceptance_rate %.6f\nsamples_used %lld\n", summary.acceptance_rate,
                static_cast<long long>(summary.samples_used));
  out << buf << "parameter,mean,std\n";
  for (const auto& p : summary.parameters) {
    std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g\n", p.name.c_str(), p.mean, p.std);
    out << buf;
  }
}

}  // namespace glider
