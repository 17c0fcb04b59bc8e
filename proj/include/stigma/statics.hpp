#ifndef STIGMA_STATICS_HPP
#define STIGMA_STATICS_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stigma/equilibrium.hpp"

namespace stigma {

/** Share of a cohort that cooperates: pi + (1 - pi) * cutoff-mass. */
double cooperation_probability(double pi, double cutoff_mass);

struct SweepRow {
  double pi = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  std::optional<double> eq_low;       // l = 0 corner, when present
  std::optional<double> eq_interior;  // interior threshold, when present
  std::optional<double> eq_high;      // l = 1 corner, when present
  bool continuum = false;
  std::optional<Regime> regime;
  std::optional<double> coop_min;  // cooperation probability at the lowest equilibrium
  std::optional<double> coop_max;  // ... and at the highest
  std::string error;               // "vacuous" marks a pi = 1 row; empty otherwise
};

/**
 * Equilibrium structure along an ascending pi grid (values in [0, 1]; a
 * pi = 1 point yields a row flagged vacuous rather than aborting the sweep).
 */
std::vector<SweepRow> sweep(double b, double alpha, std::span<const double> pi_grid);

/** Same rows as sweep(); grid points are computed on `threads` workers. */
std::vector<SweepRow> sweep_parallel(double b, double alpha, std::span<const double> pi_grid,
                                     unsigned threads);

struct MonotonicityPoint {
  double pi;
  double ell;            // interior threshold at pi
  double fd_derivative;  // finite-difference d ell / d pi (central; one-sided at the ends)
};

struct MonotonicityReport {
  double b = 0.0;
  double alpha = 0.0;
  std::vector<MonotonicityPoint> grid;  // grid points that carry an interior threshold
  std::vector<double> violations;       // pi values where the derivative estimate is negative
  // (pi, N'(pi)*D(pi) - N(pi)*D'(pi)) with N(pi) = pi*(A + B*pi),
  // D(pi) = (1-pi)*(C - D*pi), A = 1-b, B = b, C = 1, D = b: the numerator of
  // the quotient-rule derivative of the interior threshold at alpha = 0,
  // expanded symbolically and evaluated in Horner form.
  std::vector<std::pair<double, double>> sign_check;

  bool passes() const { return violations.empty(); }
};

/**
 * Interior-threshold monotonicity in pi over the supplied grid. Grid points
 * without an interior equilibrium are skipped; throws
 * EmptyInteriorRegionError when none remains.
 */
MonotonicityReport check_monotonicity(double b, double alpha, std::span<const double> pi_grid);

struct ForgivenessRow {
  double alpha = 0.0;
  double max_cutoff = 0.0;     // 1 on a continuum
  double max_coop_prob = 0.0;  // cooperation probability at that cutoff
  double min_cutoff = 0.0;     // 0 on a continuum
  double min_coop_prob = 0.0;
  std::string error;  // "vacuous" when the point has no equilibrium problem
};

/**
 * Extremal equilibrium cutoffs and cooperation probabilities along an
 * ascending alpha grid (values in [0, 1)); all four columns are
 * non-increasing in alpha.
 */
std::vector<ForgivenessRow> forgiveness_comparison(double pi, double b,
                                                   std::span<const double> alpha_grid);

struct FigureRow {
  double pi;
  std::optional<double> corner_low;   // 0 where the l = 0 corner exists
  std::optional<double> interior;     // closed-form value where it lies in [0, 1]
  std::optional<double> corner_high;  // 1 where the l = 1 corner exists
};

struct FigureData {
  std::pair<double, double> breakpoints;  // ascending: {(b-1)/b, 1/2} for alpha = 0
  std::vector<FigureRow> rows;
};

/** Equilibrium branch curves over a pi grid at alpha = 0, for plotting. */
FigureData figure_data(double b, std::span<const double> pi_grid);

/**
 * First witness pair (pi0, pi1) with pi0 < pi1 inside a multi-equilibrium
 * band where max-selection cooperation at pi0 equals 1 while min-selection
 * cooperation at pi1 equals pi1 < 1: more honesty with a worse selected
 * equilibrium. nullopt when the rows contain no such pair.
 */
std::optional<std::pair<double, double>> selection_decline_witness(
    std::span<const SweepRow> rows);

}  // namespace stigma

#endif  // STIGMA_STATICS_HPP
