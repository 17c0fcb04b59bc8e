#include "stigma/statics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "stigma/errors.hpp"

namespace stigma {

double cooperation_probability(double pi, double cutoff_mass) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::invalid_argument("pi must lie in [0, 1] (got " + std::to_string(pi) + ")");
  }
  if (!(cutoff_mass >= 0.0 && cutoff_mass <= 1.0)) {
    throw std::invalid_argument("cutoff mass must lie in [0, 1] (got " +
                                std::to_string(cutoff_mass) + ")");
  }
  return pi + (1.0 - pi) * cutoff_mass;
}

namespace {

SweepRow sweep_point(double b, double alpha, double pi) {
  SweepRow row;
  row.pi = pi;
  row.b = b;
  row.alpha = alpha;
  if (pi >= 1.0) {
    row.error = "vacuous";
    row.regime = Regime::Vacuous;
    return row;
  }
  ModelParams params(pi, b, alpha);
  EquilibriumSet set = enumerate_equilibria(params);
  row.regime = classify_regime(params).regime;
  row.continuum = set.continuum;
  if (set.continuum) {
    row.coop_min = cooperation_probability(pi, 0.0);
    row.coop_max = cooperation_probability(pi, 1.0);
    return row;
  }
  for (const ThresholdEquilibrium& eq : set.equilibria) {
    switch (eq.kind) {
      case EquilibriumKind::CornerLow: row.eq_low = eq.cutoff; break;
      case EquilibriumKind::Interior: row.eq_interior = eq.cutoff; break;
      case EquilibriumKind::CornerHigh: row.eq_high = eq.cutoff; break;
    }
  }
  row.coop_min = cooperation_probability(pi, set.min_cutoff());
  row.coop_max = cooperation_probability(pi, set.max_cutoff());
  return row;
}

void require_ascending_grid(std::span<const double> grid, const char* what) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) + " grid must be strictly ascending");
    }
  }
}

}  // namespace

std::vector<SweepRow> sweep(double b, double alpha, std::span<const double> pi_grid) {
  require_ascending_grid(pi_grid, "pi");
  for (double pi : pi_grid) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument("pi grid values must lie in [0, 1] (got " +
                                  std::to_string(pi) + ")");
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(pi_grid.size());
  for (double pi : pi_grid) rows.push_back(sweep_point(b, alpha, pi));
  return rows;
}

std::vector<SweepRow> sweep_parallel(double b, double alpha, std::span<const double> pi_grid,
                                     unsigned threads) {
  if (threads <= 1 || pi_grid.size() < 2) return sweep(b, alpha, pi_grid);
  require_ascending_grid(pi_grid, "pi");
  for (double pi : pi_grid) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument("pi grid values must lie in [0, 1] (got " +
                                  std::to_string(pi) + ")");
    }
  }
  std::vector<SweepRow> rows(pi_grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= pi_grid.size()) return;
      rows[i] = sweep_point(b, alpha, pi_grid[i]);
    }
  };
  unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(pi_grid.size()));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return rows;
}

namespace {

// Quotient-rule numerator of d(interior threshold)/d pi at alpha = 0,
// expanded to a quadratic in pi and evaluated via Horner.
double derivative_sign_object(double pi, double b) {
  const double A = 1.0 - b;
  const double B = b;
  const double C = 1.0;
  const double D = b;
  const double c0 = A * C;
  const double c1 = 2.0 * B * C;
  const double c2 = -(A * D + B * (C + D));
  return c0 + pi * (c1 + pi * c2);
}

}  // namespace

MonotonicityReport check_monotonicity(double b, double alpha,
                                      std::span<const double> pi_grid) {
  require_ascending_grid(pi_grid, "pi");
  MonotonicityReport report;
  report.b = b;
  report.alpha = alpha;
  for (double pi : pi_grid) {
    if (!(pi >= 0.0 && pi < 1.0)) continue;  // vacuous points carry no threshold
    ModelParams params(pi, b, alpha);
    std::optional<double> ell;
    try {
      ell = interior_threshold(params);
    } catch (const SingularError&) {
      continue;
    }
    if (!ell) continue;
    report.grid.push_back({pi, *ell, 0.0});
  }
  if (report.grid.empty()) {
    throw EmptyInteriorRegionError("no grid point carries an interior threshold at b = " +
                                   std::to_string(b) + ", alpha = " + std::to_string(alpha));
  }
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    const std::size_t lo = (i == 0) ? i : i - 1;
    const std::size_t hi = (i + 1 == report.grid.size()) ? i : i + 1;
    const double dpi = report.grid[hi].pi - report.grid[lo].pi;
    report.grid[i].fd_derivative =
        (dpi > 0.0) ? (report.grid[hi].ell - report.grid[lo].ell) / dpi : 0.0;
    if (report.grid[i].fd_derivative < 0.0) report.violations.push_back(report.grid[i].pi);
    if (alpha == 0.0) {
      report.sign_check.emplace_back(report.grid[i].pi,
                                     derivative_sign_object(report.grid[i].pi, b));
    }
  }
  return report;
}

std::vector<ForgivenessRow> forgiveness_comparison(double pi, double b,
                                                   std::span<const double> alpha_grid) {
  require_ascending_grid(alpha_grid, "alpha");
  std::vector<ForgivenessRow> rows;
  rows.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    ForgivenessRow row;
    row.alpha = alpha;
    if (pi >= 1.0) {
      row.error = "vacuous";
      rows.push_back(row);
      continue;
    }
    ModelParams params(pi, b, alpha);
    EquilibriumSet set = enumerate_equilibria(params);
    row.max_cutoff = set.max_cutoff();
    row.max_coop_prob = cooperation_probability(pi, row.max_cutoff);
    row.min_cutoff = set.min_cutoff();
    row.min_coop_prob = cooperation_probability(pi, row.min_cutoff);
    rows.push_back(row);
  }
  return rows;
}

FigureData figure_data(double b, std::span<const double> pi_grid) {
  require_ascending_grid(pi_grid, "pi");
  FigureData data;
  const double low_edge = (b - 1.0) / b;  // l = 0 corner exists for pi at or below this
  const double high_edge = 0.5;           // l = 1 corner exists for pi at or above this
  data.breakpoints = std::minmax(low_edge, high_edge);
  for (double pi : pi_grid) {
    FigureRow row;
    row.pi = pi;
    if (pi >= 1.0) {
      data.rows.push_back(row);
      continue;
    }
    ModelParams params(pi, b, 0.0);
    if (pi <= low_edge) row.corner_low = 0.0;
    if (pi >= high_edge) row.corner_high = 1.0;
    try {
      row.interior = interior_threshold(params);
    } catch (const SingularError&) {
      // a singular point contributes no interior branch value
    }
    data.rows.push_back(row);
  }
  return data;
}

std::optional<std::pair<double, double>> selection_decline_witness(
    std::span<const SweepRow> rows) {
  constexpr double kTol = 1e-9;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& a = rows[i];
    if (!a.coop_max || std::abs(*a.coop_max - 1.0) > kTol) continue;
    if (a.regime != Regime::TripleEquilibrium && !a.continuum) continue;
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const SweepRow& c = rows[j];
      if (c.pi <= a.pi || c.pi >= 1.0) continue;
      if (!c.coop_min) continue;
      // min-selection cooperation collapses to the honest share alone
      if (std::abs(*c.coop_min - c.pi) <= kTol && *c.coop_min < 1.0 - kTol) {
        return std::make_pair(a.pi, c.pi);
      }
    }
  }
  return std::nullopt;
}

}  // namespace stigma
