#ifndef STIGMA_EQUILIBRIUM_HPP
#define STIGMA_EQUILIBRIUM_HPP

#include <optional>
#include <utility>
#include <vector>

#include "stigma/errors.hpp"
#include "stigma/model.hpp"

namespace stigma {

/**
 * Best response of the marginal strategic youth to the belief that other
 * strategic players cooperate below `belief`. With P = meeting_coop_prob:
 *
 *   unclamped = pi * (1 - b + b*P(belief)*(1-alpha)) / (1 - pi)
 *
 * Affine in the belief (uniform costs) with slope b*pi*(1-alpha).
 */
struct BestResponse {
  double unclamped;
  double clamped;  // min(1, max(0, unclamped))
};

BestResponse best_response_cutoff(double belief, const ModelParams& params);

/**
 * Interior fixed point of the best-response map, in closed form (uniform
 * costs only):
 *
 *   l* = pi*(1 - b + q) / ((1-pi)*(1 - q)),   q = b*pi*(1-alpha).
 *
 * Returns the value when it lies strictly inside (0, 1), nullopt otherwise.
 * Throws SingularError when |q - 1| < 1e-12 and UnsupportedError for
 * non-uniform cost distributions.
 */
std::optional<double> interior_threshold(const ModelParams& params);

/**
 * Root of g(l) = best_response_cutoff(l).unclamped - l on [lo, hi] by
 * bisection (interval width 1e-14, residual 1e-12, at most 200 iterations).
 * Works for any cost distribution; this is the independent check on the
 * closed form above. Throws NoSignChangeError when the bracket does not
 * straddle a root and ContinuumError when g vanishes identically on it.
 */
double fixed_point_bisection(const ModelParams& params, double lo, double hi);

enum class EquilibriumKind { CornerLow, Interior, CornerHigh };

struct ThresholdEquilibrium {
  double cutoff;
  EquilibriumKind kind;
  double residual;  // |clamped best response at cutoff - cutoff|
};

struct EquilibriumSet {
  std::vector<ThresholdEquilibrium> equilibria;  // ascending by cutoff
  bool continuum = false;  // every l in [0,1] is a fixed point; sequence empty

  double min_cutoff() const { return continuum ? 0.0 : equilibria.front().cutoff; }
  double max_cutoff() const { return continuum ? 1.0 : equilibria.back().cutoff; }
};

/**
 * All symmetric threshold equilibria. Corners use the weak rules
 *   l = 0 in the set  iff  BR(0).unclamped <= 0
 *   l = 1 in the set  iff  BR(1).unclamped >= 1
 * and the continuum flag is set iff the best-response map is the identity
 * (slope b*pi*(1-alpha) = 1 and intercept 0, within 1e-12; equivalently
 * b = 2 and pi*(1-alpha) = 1/2). Throws VacuousError for pi = 1.
 */
EquilibriumSet enumerate_equilibria(const ModelParams& params);

/**
 * Honest-population share above which cooperating at the worst private loss
 * beats defecting even against the most pessimistic belief:
 *   2 * (1 - 1/b),  meaningful for b in (1, 2); values >= 1 mean the
 * dominance region is empty. Throws std::invalid_argument for b <= 1.
 */
double dominance_threshold(double b);

/**
 * true iff coop_payoff(1, 0, params) > defect_payoff(0, params); only defined
 * for alpha = 0 (UnsupportedError otherwise).
 */
bool is_cooperation_dominant(const ModelParams& params);

enum class Regime {
  AllDefect,
  UniqueInterior,
  AllCooperate,
  TripleEquilibrium,
  Continuum,
  DominantCooperation,  // supersedes AllCooperate when dominance holds
  Vacuous,              // pi = 1
};

struct RegimeClassification {
  Regime regime;
  // Critical pi values for the current (b, alpha), ascending: where the l=0
  // corner ceases, (b-1)/(b*(1-alpha)), and where the l=1 corner begins,
  // 1/(2 - b*alpha). May leave [0, 1]; reported as computed.
  std::pair<double, double> boundaries;
};

RegimeClassification classify_regime(const ModelParams& params);

}  // namespace stigma

#endif  // STIGMA_EQUILIBRIUM_HPP
