#include "stigma/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace stigma {

namespace {

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1] (got " +
                                std::to_string(x) + ")");
  }
}

}  // namespace

CostDistribution CostDistribution::uniform() {
  return CostDistribution("uniform", {}, true);
}

CostDistribution CostDistribution::from_cdf(std::string name, std::function<double(double)> cdf) {
  if (!cdf) throw std::invalid_argument("cost distribution needs a callable CDF");
  CostDistribution dist(std::move(name), std::move(cdf), false);
  if (std::abs(dist.cdf_(0.0)) > 1e-9 || std::abs(dist.cdf_(1.0) - 1.0) > 1e-9) {
    throw std::invalid_argument("cost CDF must satisfy F(0) = 0 and F(1) = 1");
  }
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    const double v = dist.cdf_(x);
    if (!(std::isfinite(v)) || v < prev - 1e-12) {
      throw std::invalid_argument("cost CDF must be finite and non-decreasing on [0, 1]");
    }
    prev = v;
  }
  return dist;
}

double CostDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return uniform_ ? x : cdf_(x);
}

double CostDistribution::sample(SplitMix64& rng) const {
  const double u = rng.next_unit();
  if (uniform_) return u;
  // Inverse transform by bisection: smallest x with F(x) >= u.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return hi;
}

ModelParams::ModelParams(double pi_, double b_, double alpha_, CostDistribution dist)
    : pi(pi_), b(b_), alpha(alpha_), cost_distribution(std::move(dist)) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::invalid_argument("pi must lie in [0, 1] (got " + std::to_string(pi) + ")");
  }
  if (!(b > 1.0)) {
    throw std::invalid_argument("b must exceed 1 (got " + std::to_string(b) + ")");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1) (got " + std::to_string(alpha) + ")");
  }
}

double stage_payoff(Action self, Action other, double loss_self, const ModelParams& params) {
  require_unit(loss_self, "loss_self");
  if (self == Action::Cooperate) {
    return other == Action::Cooperate ? 1.0 : -loss_self;
  }
  return other == Action::Cooperate ? params.b : 0.0;
}

StagePayoffs stage_payoffs(Action row, Action col, double loss_row, double loss_col,
                           const ModelParams& params) {
  return {stage_payoff(row, col, loss_row, params), stage_payoff(col, row, loss_col, params)};
}

double meeting_coop_prob(double cutoff, const ModelParams& params) {
  require_unit(cutoff, "cutoff");
  return params.pi + (1.0 - params.pi) * params.cost_distribution.cdf(cutoff);
}

double defect_payoff(double cutoff, const ModelParams& params) {
  const double p = meeting_coop_prob(cutoff, params);
  return params.b * (params.pi + (1.0 - params.pi) * p + params.alpha * params.pi * p);
}

double coop_payoff(double loss_self, double cutoff, const ModelParams& params) {
  require_unit(loss_self, "loss_self");
  const double p = meeting_coop_prob(cutoff, params);
  return -(1.0 - params.pi) * loss_self + params.pi + p * params.b;
}

}  // namespace stigma
