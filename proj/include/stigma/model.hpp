#ifndef STIGMA_MODEL_HPP
#define STIGMA_MODEL_HPP

#include <functional>
#include <string>

#include "stigma/rng.hpp"

namespace stigma {

enum class Action { Cooperate, Defect };

/**
 * Distribution of the private loss a cooperator suffers when defected on,
 * supported on [0, 1]. The baseline model fixes this to Uniform(0,1); any
 * other CDF is a forward-compatibility hook served only by the bisection
 * solver (the closed-form routines refuse it).
 */
class CostDistribution {
 public:
  static CostDistribution uniform();

  /**
   * Wrap an arbitrary CDF. Validates F(0)=0, F(1)=1 and monotonicity on a
   * 101-point grid; throws std::invalid_argument on failure.
   */
  static CostDistribution from_cdf(std::string name, std::function<double(double)> cdf);

  double cdf(double x) const;

  /** Inverse-transform sample (closed form for uniform, bisection otherwise). */
  double sample(SplitMix64& rng) const;

  bool is_uniform() const { return uniform_; }
  const std::string& name() const { return name_; }

 private:
  CostDistribution(std::string name, std::function<double(double)> cdf, bool uniform)
      : name_(std::move(name)), cdf_(std::move(cdf)), uniform_(uniform) {}

  std::string name_;
  std::function<double(double)> cdf_;
  bool uniform_;
};

/**
 * Primitive parameters of the two-group overlapping-generations game.
 *
 *   pi     fraction of honest types in each cohort, in [0, 1]
 *   b      one-shot gain from defecting on a cooperator; must exceed 1
 *   alpha  per-period probability that a stigma is erased, in [0, 1)
 *
 * Lifetime payoffs are the undiscounted sum of the young-period and
 * old-period stage payoffs; there is no discount-factor knob.
 */
struct ModelParams {
  double pi;
  double b;
  double alpha;
  CostDistribution cost_distribution;

  explicit ModelParams(double pi_, double b_, double alpha_ = 0.0,
                       CostDistribution dist = CostDistribution::uniform());
};

struct StagePayoffs {
  double row_payoff;
  double col_payoff;
};

/**
 * One player's stage payoff. (C,C) -> 1, (D,D) -> 0, defecting on a
 * cooperator -> b, cooperating with a defector -> -loss_self.
 */
double stage_payoff(Action self, Action other, double loss_self, const ModelParams& params);

/** Both sides of one match, each priced with its own loss draw. */
StagePayoffs stage_payoffs(Action row, Action col, double loss_row, double loss_col,
                           const ModelParams& params);

/**
 * Probability that a young partner cooperates with a clear-record old player
 * when strategic youths use the given loss cutoff:
 *   P(cutoff) = pi + (1 - pi) * F(cutoff).
 */
double meeting_coop_prob(double cutoff, const ModelParams& params);

/**
 * Expected two-period payoff of a young strategic player who defects on a
 * clear-record partner, when every other strategic player uses `cutoff`:
 *
 *   b * [ pi + (1-pi)*P + alpha*pi*P ],   P = meeting_coop_prob(cutoff).
 *
 * Defecting on an honest partner creates a stigma that survives to the old
 * period with probability 1-alpha and costs the entire old-period payoff
 * P*b; the alpha*pi*P term is the expected reprieve. With alpha = 0 this
 * reduces to [ pi(2-pi) + (1-pi)^2 * cutoff ] * b.
 */
double defect_payoff(double cutoff, const ModelParams& params);

/**
 * Expected two-period payoff of a young strategic player with private loss
 * `loss_self` who cooperates with a clear-record partner:
 *
 *   -(1-pi)*loss_self + pi + P*b.
 *
 * Independent of alpha: cooperation never creates a stigma.
 */
double coop_payoff(double loss_self, double cutoff, const ModelParams& params);

}  // namespace stigma

#endif  // STIGMA_MODEL_HPP
