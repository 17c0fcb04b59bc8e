#include "stigma/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stigma {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kBisectWidth = 1e-14;
constexpr double kResidualTol = 1e-12;
constexpr int kMaxBisectIter = 200;

void require_strategic_presence(const ModelParams& params) {
  if (params.pi >= 1.0) {
    throw VacuousError("pi = 1: every player is honest, the threshold problem is vacuous");
  }
}

double fixed_point_defect(double cutoff, const ModelParams& params) {
  return best_response_cutoff(cutoff, params).unclamped - cutoff;
}

ThresholdEquilibrium make_equilibrium(double cutoff, EquilibriumKind kind,
                                      const ModelParams& params) {
  const double residual = std::abs(best_response_cutoff(cutoff, params).clamped - cutoff);
  return {cutoff, kind, residual};
}

// Interior roots for a non-uniform cost distribution: panel scan + bisection.
std::vector<double> scan_interior_roots(const ModelParams& params) {
  constexpr int kPanels = 512;
  std::vector<double> roots;
  double x0 = 0.0;
  double g0 = fixed_point_defect(x0, params);
  for (int i = 1; i <= kPanels; ++i) {
    const double x1 = static_cast<double>(i) / kPanels;
    const double g1 = fixed_point_defect(x1, params);
    if (g0 == 0.0 && x0 > 0.0 && x0 < 1.0) {
      roots.push_back(x0);
    } else if (g0 * g1 < 0.0) {
      roots.push_back(fixed_point_bisection(params, x0, x1));
    }
    x0 = x1;
    g0 = g1;
  }
  std::erase_if(roots, [](double r) { return r <= 1e-9 || r >= 1.0 - 1e-9; });
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double c) { return std::abs(a - c) < 1e-9; }),
              roots.end());
  return roots;
}

}  // namespace

BestResponse best_response_cutoff(double belief, const ModelParams& params) {
  if (!(belief >= 0.0 && belief <= 1.0)) {
    throw std::invalid_argument("belief must lie in [0, 1]");
  }
  require_strategic_presence(params);
  const double p = meeting_coop_prob(belief, params);
  const double unclamped =
      params.pi * (1.0 - params.b + params.b * p * (1.0 - params.alpha)) / (1.0 - params.pi);
  return {unclamped, std::clamp(unclamped, 0.0, 1.0)};
}

std::optional<double> interior_threshold(const ModelParams& params) {
  if (!params.cost_distribution.is_uniform()) {
    throw UnsupportedError("interior_threshold requires the uniform cost distribution");
  }
  require_strategic_presence(params);
  const double q = params.b * params.pi * (1.0 - params.alpha);
  if (std::abs(q - 1.0) < kSingularTol) {
    throw SingularError("b*pi*(1-alpha) = 1: interior fixed-point condition is degenerate");
  }
  const double value = params.pi * (1.0 - params.b + q) / ((1.0 - params.pi) * (1.0 - q));
  if (value > 0.0 && value < 1.0) return value;
  return std::nullopt;
}

double fixed_point_bisection(const ModelParams& params, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw std::invalid_argument("bisection bracket must satisfy 0 <= lo < hi <= 1");
  }
  require_strategic_presence(params);

  bool all_zero = true;
  for (int i = 0; i <= 4; ++i) {
    const double x = lo + (hi - lo) * i / 4.0;
    if (std::abs(fixed_point_defect(x, params)) >= kSingularTol) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    throw ContinuumError("fixed-point defect vanishes on the whole bracket");
  }

  double glo = fixed_point_defect(lo, params);
  double ghi = fixed_point_defect(hi, params);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (glo * ghi > 0.0) {
    throw NoSignChangeError("bracket does not straddle a fixed point");
  }

  for (int i = 0; i < kMaxBisectIter; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gmid = fixed_point_defect(mid, params);
    if (gmid == 0.0 || (hi - lo <= kBisectWidth && std::abs(gmid) <= kResidualTol)) {
      return mid;
    }
    if ((gmid < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EquilibriumSet enumerate_equilibria(const ModelParams& params) {
  require_strategic_presence(params);
  EquilibriumSet set;

  const BestResponse br0 = best_response_cutoff(0.0, params);
  const BestResponse br1 = best_response_cutoff(1.0, params);

  std::vector<double> interior;
  if (params.cost_distribution.is_uniform()) {
    const double q = params.b * params.pi * (1.0 - params.alpha);
    if (std::abs(q - 1.0) < kSingularTol) {
      if (std::abs(br0.unclamped) < kSingularTol) {
        // Identity best-response map: b = 2 and pi*(1-alpha) = 1/2.
        set.continuum = true;
        return set;
      }
      // Shifted identity: no interior root, corners decide below.
    } else if (auto value = interior_threshold(params)) {
      interior.push_back(*value);
    }
  } else {
    bool identity = true;
    for (int i = 0; i <= 10; ++i) {
      if (std::abs(fixed_point_defect(i / 10.0, params)) >= kSingularTol) {
        identity = false;
        break;
      }
    }
    if (identity) {
      set.continuum = true;
      return set;
    }
    interior = scan_interior_roots(params);
  }

  if (br0.unclamped <= 0.0) {
    set.equilibria.push_back(make_equilibrium(0.0, EquilibriumKind::CornerLow, params));
  }
  for (double root : interior) {
    set.equilibria.push_back(make_equilibrium(root, EquilibriumKind::Interior, params));
  }
  if (br1.unclamped >= 1.0) {
    set.equilibria.push_back(make_equilibrium(1.0, EquilibriumKind::CornerHigh, params));
  }
  return set;
}

double dominance_threshold(double b) {
  if (!(b > 1.0)) {
    throw std::invalid_argument("b must exceed 1 (got " + std::to_string(b) + ")");
  }
  return 2.0 * (1.0 - 1.0 / b);
}

bool is_cooperation_dominant(const ModelParams& params) {
  if (params.alpha != 0.0) {
    throw UnsupportedError("dominance analysis is defined for alpha = 0 only");
  }
  return coop_payoff(1.0, 0.0, params) > defect_payoff(0.0, params);
}

RegimeClassification classify_regime(const ModelParams& params) {
  const double corner_low_edge = (params.b - 1.0) / (params.b * (1.0 - params.alpha));
  const double denom = 2.0 - params.b * params.alpha;
  const double corner_high_edge =
      denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
  RegimeClassification out;
  out.boundaries = std::minmax(corner_low_edge, corner_high_edge);

  if (params.pi >= 1.0) {
    out.regime = Regime::Vacuous;
    return out;
  }
  const EquilibriumSet set = enumerate_equilibria(params);
  if (set.continuum) {
    out.regime = Regime::Continuum;
    return out;
  }
  if (set.equilibria.size() >= 2) {
    // Two-element sets arise only at the exact band edges, where the interior
    // root coincides with a corner; they belong to the multi-equilibrium band.
    out.regime = Regime::TripleEquilibrium;
    return out;
  }
  switch (set.equilibria.front().kind) {
    case EquilibriumKind::CornerLow:
      out.regime = Regime::AllDefect;
      break;
    case EquilibriumKind::Interior:
      out.regime = Regime::UniqueInterior;
      break;
    case EquilibriumKind::CornerHigh:
      out.regime = params.alpha == 0.0 && is_cooperation_dominant(params)
                       ? Regime::DominantCooperation
                       : Regime::AllCooperate;
      break;
  }
  return out;
}

}  // namespace stigma
