#include "stigma/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "stigma/equilibrium.hpp"
#include "stigma/errors.hpp"
#include "stigma/io.hpp"
#include "stigma/model.hpp"
#include "stigma/simulator.hpp"
#include "stigma/statics.hpp"

namespace stigma {

namespace {

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& msg) {
  if (!ok) throw CriterionFailure(msg);
}

std::string fmt(double x) { return format_double(x); }

// --- 1: one equilibrium everywhere below b = 2, kinds laid out in pi bands --

std::string criterion_unique_regime_curve(AcceptanceMode) {
  const double b = 1.5;
  const double low_edge = (b - 1.0) / b;  // corner at 0 exists up to here
  const double high_edge = 0.5;           // corner at 1 exists from here on
  int n_low = 0, n_interior = 0, n_high = 0;
  for (int i = 0; i < 1000; ++i) {
    const double pi = (i + 0.5) / 1000.0;
    const ModelParams params(pi, b, 0.0);
    const EquilibriumSet set = enumerate_equilibria(params);
    check(!set.continuum, "unexpected continuum at pi = " + fmt(pi));
    check(set.equilibria.size() == 1,
          "expected a unique equilibrium at pi = " + fmt(pi) + ", got " +
              std::to_string(set.equilibria.size()));
    const ThresholdEquilibrium& eq = set.equilibria.front();
    check(eq.residual <= 1e-10, "residual " + fmt(eq.residual) + " at pi = " + fmt(pi));
    const RegimeClassification cls = classify_regime(params);
    check(std::abs(cls.boundaries.first - low_edge) <= 1e-12 &&
              std::abs(cls.boundaries.second - high_edge) <= 1e-12,
          "regime boundaries off at pi = " + fmt(pi));
    if (pi < low_edge) {
      check(eq.kind == EquilibriumKind::CornerLow && eq.cutoff == 0.0,
            "expected the all-defect corner at pi = " + fmt(pi));
      check(cls.regime == Regime::AllDefect, "regime mismatch at pi = " + fmt(pi));
      ++n_low;
    } else if (pi < high_edge) {
      check(eq.kind == EquilibriumKind::Interior,
            "expected an interior equilibrium at pi = " + fmt(pi));
      const auto closed = interior_threshold(params);
      check(closed && std::abs(*closed - eq.cutoff) <= 1e-12,
            "interior value disagrees with the closed form at pi = " + fmt(pi));
      check(cls.regime == Regime::UniqueInterior, "regime mismatch at pi = " + fmt(pi));
      ++n_interior;
    } else {
      check(eq.kind == EquilibriumKind::CornerHigh && eq.cutoff == 1.0,
            "expected the all-cooperate corner at pi = " + fmt(pi));
      check(cls.regime == Regime::AllCooperate ||
                cls.regime == Regime::DominantCooperation,
            "regime mismatch at pi = " + fmt(pi));
      ++n_high;
    }
  }
  check(n_low == 333 && n_interior == 167 && n_high == 500,
        "band sizes off: " + std::to_string(n_low) + "/" + std::to_string(n_interior) +
            "/" + std::to_string(n_high));
  // the interior curve is continuous at the band edges: its closed form
  // touches 0 at the lower breakpoint and 1 at the upper one
  const auto curve = [b](double pi) {
    return pi * (1.0 - b * (1.0 - pi)) / ((1.0 - pi) * (1.0 - b * pi));
  };
  check(std::abs(curve(low_edge) - 0.0) <= 1e-9,
        "interior curve does not meet the all-defect corner at the breakpoint");
  check(std::abs(curve(high_edge) - 1.0) <= 1e-9,
        "interior curve does not meet the all-cooperate corner at the breakpoint");
  return "1000 grid points, bands 333/167/500, curve continuous at breakpoints " +
         fmt(low_edge) + " and " + fmt(high_edge);
}

// --- 2: three equilibria exactly inside the overlap band for b = 3 ---------

std::string criterion_multi_equilibrium_band(AcceptanceMode) {
  const double b = 3.0;
  const double band_lo = 0.5;
  const double band_hi = (b - 1.0) / b;  // 2/3
  int n_band = 0, n_outside = 0;
  for (int i = 0; i < 1000; ++i) {
    const double pi = (i + 0.5) / 1000.0;
    const ModelParams params(pi, b, 0.0);
    const EquilibriumSet set = enumerate_equilibria(params);
    check(!set.continuum, "unexpected continuum at pi = " + fmt(pi));
    if (pi > band_lo && pi < band_hi) {
      check(set.equilibria.size() == 3,
            "expected three equilibria at pi = " + fmt(pi) + ", got " +
                std::to_string(set.equilibria.size()));
      check(set.equilibria[0].cutoff == 0.0 &&
                set.equilibria[1].kind == EquilibriumKind::Interior &&
                set.equilibria[2].cutoff == 1.0,
            "expected {0, interior, 1} at pi = " + fmt(pi));
      const auto closed = interior_threshold(params);
      check(closed && std::abs(*closed - set.equilibria[1].cutoff) <= 1e-12,
            "interior value disagrees with the closed form at pi = " + fmt(pi));
      ++n_band;
    } else {
      check(set.equilibria.size() == 1,
            "expected a unique equilibrium at pi = " + fmt(pi) + ", got " +
                std::to_string(set.equilibria.size()));
      ++n_outside;
    }
  }
  check(n_band == 167 && n_outside == 833,
        "band sizes off: " + std::to_string(n_band) + " inside / " +
            std::to_string(n_outside) + " outside");
  const auto frozen = interior_threshold(ModelParams(0.55, 3.0, 0.0));
  check(frozen.has_value(), "no interior value at the frozen point");
  check(std::abs(*frozen - 0.65812) <= 1e-5,
        "interior value at pi = 0.55 left its pinned window: " + fmt(*frozen));
  check(std::abs(*frozen - 0.6581196581196581) <= 1e-12,
        "frozen interior value drifted: " + fmt(*frozen));
  return "three equilibria at all 167 grid points strictly inside (" + fmt(band_lo) +
         ", " + fmt(band_hi) + "), one equilibrium at the 833 outside; interior(0.55) = " +
         fmt(*frozen);
}

// --- 3: closed-form interior threshold agrees with blind bisection ---------

std::string criterion_closed_form_vs_bisection(AcceptanceMode) {
  int checked = 0;
  double worst = 0.0;
  for (int i = 1; i <= 19; ++i) {
    const double pi = i / 20.0;
    for (int j = 11; j <= 39; ++j) {
      const double b = j / 10.0;
      for (const double alpha : {0.0, 0.3, 0.6}) {
        const ModelParams params(pi, b, alpha);
        std::optional<double> closed;
        try {
          closed = interior_threshold(params);
        } catch (const SingularError&) {
          continue;
        }
        if (!closed) continue;
        const double root = fixed_point_bisection(params, 0.0, 1.0);
        const double gap = std::abs(root - *closed);
        worst = std::max(worst, gap);
        check(gap <= 1e-10, "routes disagree by " + fmt(gap) + " at pi = " + fmt(pi) +
                                ", b = " + fmt(b) + ", alpha = " + fmt(alpha));
        const BestResponse br = best_response_cutoff(root, params);
        check(std::abs(br.clamped - root) <= 1e-10,
              "bisection root is not a fixed point at pi = " + fmt(pi));
        ++checked;
      }
    }
  }
  check(checked >= 150, "interior grid unexpectedly sparse: " + std::to_string(checked));
  return std::to_string(checked) + " interior points cross-checked, worst gap " +
         fmt(worst);
}

// --- 4: dominance flips exactly at its closed-form boundary ----------------

std::string criterion_dominance_boundary(AcceptanceMode) {
  std::ostringstream detail;
  const double step = 1.0 / 10000.0;
  for (const double b : {1.1, 1.3, 1.5, 1.7, 1.9}) {
    const double bound = dominance_threshold(b);  // closed form 2(1 - 1/b)
    double onset = -1.0;
    bool prev = false;
    for (int i = 0; i < 10000; ++i) {
      const double pi = (i + 0.5) * step;
      const bool dominant = is_cooperation_dominant(ModelParams(pi, b, 0.0));
      check(!(prev && !dominant), "dominance switched back off at pi = " + fmt(pi) +
                                      " for b = " + fmt(b));
      if (dominant && onset < 0.0) onset = pi;
      prev = dominant;
    }
    check(onset > 0.0, "no dominant point found for b = " + fmt(b));
    check(std::abs(onset - bound) <= step,
          "worst-case comparison flips at pi = " + fmt(onset) +
              ", not at the closed-form bound " + fmt(bound) + ", for b = " + fmt(b) +
              " (the bound's algebra does not match the comparison it abbreviates;"
              " the flip solves b*pi^2 + (2-b)*pi - 1 = 0)");
    for (int i = 0; i < 10000; ++i) {
      const double pi = (i + 0.5) * step;
      if (pi <= bound) continue;
      const ModelParams params(pi, b, 0.0);
      check(coop_payoff(1.0, 0.0, params) > defect_payoff(0.0, params),
            "worst-case cooperation loses to defection at pi = " + fmt(pi) +
                " although the closed-form bound " + fmt(bound) + " sits below it (b = " +
                fmt(b) + ")");
    }
    detail << "b=" << fmt(b) << " onset " << fmt(onset) << "; ";
  }
  detail << "all onsets on the closed-form bound";
  return detail.str();
}

// --- 5: interior threshold rises with the honest share ---------------------

std::string criterion_threshold_monotonicity(AcceptanceMode) {
  std::size_t points = 0;
  for (const double b : {1.1, 1.3, 1.5, 1.7, 1.9}) {
    // sample strictly inside the interior band ((b-1)/b, 1/2)
    const double lo = (b - 1.0) / b;
    const double hi = 0.5;
    const double margin = 0.02 * (hi - lo);
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) {
      grid.push_back(lo + margin + (hi - lo - 2.0 * margin) * i / 60.0);
    }
    const MonotonicityReport report = check_monotonicity(b, 0.0, grid);
    check(report.grid.size() == grid.size(),
          "some grid points lost their interior threshold for b = " + fmt(b));
    check(report.passes(),
          "finite-difference derivative went negative for b = " + fmt(b));
    for (const MonotonicityPoint& pt : report.grid) {
      check(pt.fd_derivative > 0.0, "flat or falling threshold at pi = " + fmt(pt.pi) +
                                        ", b = " + fmt(b));
    }
    check(report.sign_check.size() == report.grid.size(),
          "sign object missing at some grid points for b = " + fmt(b));
    for (const auto& [pi, s] : report.sign_check) {
      check(s > 0.0, "derivative sign object non-positive at pi = " + fmt(pi) +
                         ", b = " + fmt(b));
    }
    points += report.grid.size();
  }
  // frozen regression value: the sign object at pi = 0.4, b = 1.5
  const MonotonicityReport probe =
      check_monotonicity(1.5, 0.0, std::vector<double>{0.39, 0.4, 0.41});
  double frozen = 0.0;
  for (const auto& [pi, s] : probe.sign_check) {
    if (std::abs(pi - 0.4) < 1e-9) frozen = s;
  }
  check(std::abs(frozen - 0.22) <= 1e-12, "frozen sign value drifted: " + fmt(frozen));
  return std::to_string(points) +
         " interior points across five b values rise monotonically; sign object at "
         "(0.4, b=1.5) = " +
         fmt(frozen);
}

// --- 6: more honesty, worse selected equilibrium ----------------------------

std::string criterion_selection_decline_witness(AcceptanceMode) {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(k / 20.0);
  const std::vector<SweepRow> rows = sweep(3.0, 0.0, grid);
  const auto witness = selection_decline_witness(rows);
  check(witness.has_value(), "no witness pair found in the sweep");
  check(witness->first < witness->second, "witness pair is not ascending");
  // the overlap band for b = 3 is [1/2, 2/3]; both witnesses must sit inside it
  check(witness->first >= 0.5 - 1e-12 && witness->second <= 2.0 / 3.0 + 1e-12,
        "witness pair escaped the multi-equilibrium band: (" + fmt(witness->first) +
            ", " + fmt(witness->second) + ")");
  const SweepRow* low = nullptr;
  const SweepRow* high = nullptr;
  for (const SweepRow& row : rows) {
    if (std::abs(row.pi - witness->first) <= 1e-12) low = &row;
    if (std::abs(row.pi - witness->second) <= 1e-12) high = &row;
  }
  check(low && high, "witness rows missing from the sweep");
  check(low->coop_max && std::abs(*low->coop_max - 1.0) <= 1e-12,
        "best selection at the lower pi should reach full cooperation");
  check(high->coop_min && std::abs(*high->coop_min - witness->second) <= 1e-12 &&
            *high->coop_min < 1.0,
        "worst selection at the higher pi should collapse to the honest share");
  check(*low->coop_max > *high->coop_min, "cooperation failed to decline");
  // frozen on this grid: pi = 0.5 is the first row whose best selection reaches
  // full cooperation (the band edge carries both corner equilibria)
  check(std::abs(witness->first - 0.5) <= 1e-12 &&
            std::abs(witness->second - 0.55) <= 1e-12,
        "witness moved: (" + fmt(witness->first) + ", " + fmt(witness->second) + ")");
  return "coop(max, pi=0.5) = " + fmt(*low->coop_max) +
         " > coop(min, pi=0.55) = " + fmt(*high->coop_min);
}

// --- 7: forgiveness never raises the best sustainable cooperation ----------

std::string criterion_forgiveness_never_helps(AcceptanceMode) {
  std::vector<double> alphas;
  for (int j = 0; j < 10; ++j) alphas.push_back(j / 10.0);
  int pairs = 0;
  for (int k = 1; k <= 20; ++k) {
    const double pi = k / 21.0;
    for (int j = 1; j <= 20; ++j) {
      const double b = 1.0 + 0.15 * j;
      const std::vector<ForgivenessRow> rows = forgiveness_comparison(pi, b, alphas);
      for (std::size_t t = 1; t < rows.size(); ++t) {
        check(rows[t].max_cutoff <= rows[t - 1].max_cutoff + 1e-12,
              "max cutoff rose with alpha at pi = " + fmt(pi) + ", b = " + fmt(b) +
                  ", alpha = " + fmt(rows[t].alpha));
        check(rows[t].max_coop_prob <= rows[t - 1].max_coop_prob + 1e-12,
              "max cooperation rose with alpha at pi = " + fmt(pi) + ", b = " + fmt(b));
        check(rows[t].min_cutoff <= rows[t - 1].min_cutoff + 1e-12,
              "min cutoff rose with alpha at pi = " + fmt(pi) + ", b = " + fmt(b) +
                  ", alpha = " + fmt(rows[t].alpha));
        check(rows[t].min_coop_prob <= rows[t - 1].min_coop_prob + 1e-12,
              "min cooperation rose with alpha at pi = " + fmt(pi) + ", b = " + fmt(b));
      }
      ++pairs;
    }
  }
  const std::vector<double> witness_alphas{0.0, 0.5};
  const std::vector<ForgivenessRow> wit = forgiveness_comparison(0.4, 1.5, witness_alphas);
  check(std::abs(wit[0].max_cutoff - 1.0 / 6.0) <= 1e-12,
        "witness cutoff at alpha = 0 drifted: " + fmt(wit[0].max_cutoff));
  check(wit[1].max_cutoff == 0.0, "witness cutoff should collapse at alpha = 0.5");
  check(std::abs(wit[0].max_coop_prob - 0.5) <= 1e-12 &&
            std::abs(wit[1].max_coop_prob - 0.4) <= 1e-12,
        "witness cooperation probabilities drifted");
  return std::to_string(pairs) + " (pi, b) pairs: both extremal cutoffs stay "
         "non-increasing across alpha; witness cutoff 1/6 -> 0";
}

// --- 8: long simulation reproduces the stationary theory -------------------

std::string criterion_simulation_matches_theory(AcceptanceMode mode) {
  SimConfig cfg{ModelParams(0.4, 1.5, 0.0)};
  cfg.cohort_size = mode == AcceptanceMode::Full ? 100000 : 20000;
  cfg.periods = mode == AcceptanceMode::Full ? 50 : 30;
  cfg.burn_in = 2;
  cfg.seed = 7;
  cfg.strategy = 1.0 / 6.0;  // the interior equilibrium cutoff, pinned
  const SimStats stats = run_simulation(cfg);
  check(std::abs(stats.resolved_cutoff - 1.0 / 6.0) <= 1e-12,
        "resolved cutoff drifted from the pinned value");
  const double coop_prob = 0.5;   // pi + (1 - pi) * cutoff
  const double stigma = 0.2;      // (1 - pi) * pi * (1 - cutoff)
  check(std::abs(stats.young_coop_rate_given_clear - coop_prob) <= 0.005,
        "clear-partner cooperation rate " + fmt(stats.young_coop_rate_given_clear) +
            " vs " + fmt(coop_prob));
  check(std::abs(stats.young_coop_rate - (1.0 - stigma) * coop_prob) <= 0.005,
        "unconditional cooperation rate " + fmt(stats.young_coop_rate) + " vs " +
            fmt((1.0 - stigma) * coop_prob));
  check(std::abs(stats.stigma_prevalence_old - stigma) <= 0.004,
        "stigma prevalence " + fmt(stats.stigma_prevalence_old) + " vs " + fmt(stigma));
  check(std::abs(stats.old_coop_rate - 0.4) <= 0.005,
        "old cooperation rate " + fmt(stats.old_coop_rate) + " vs " + fmt(0.4));
  const VerificationReport report = compare_to_theory(stats, cfg, 3.5);
  std::ostringstream detail;
  for (const TheoryLine& line : report.lines) {
    check(line.status != LineStatus::Fail,
          line.name + " off by z = " + fmt(line.z) + " (empirical " +
              fmt(line.empirical) + ", theory " + fmt(line.theory) + ")");
    if (line.name.rfind("marginal_payoff", 0) == 0) {
      check(line.status == LineStatus::Pass, line.name + " is short of samples");
      check(std::abs(line.theory - 1.05) <= 1e-12,
            "comparison payoff should sit at the indifference value 1.05");
      detail << line.name << " z=" << fmt(line.z) << " n=" << line.n << "; ";
    }
  }
  check(report.passed, "verification report failed");
  return detail.str() + "rates within 0.005 of theory";
}

// --- 9: all-honest and no-honest populations behave exactly ----------------

std::string criterion_degenerate_populations(AcceptanceMode) {
  SimConfig all_honest{ModelParams(1.0, 1.5, 0.0)};
  all_honest.cohort_size = 20000;
  all_honest.periods = 10;
  all_honest.burn_in = 2;
  all_honest.seed = 11;
  all_honest.strategy = SelectionPolicy::InteriorIfExists;
  const SimStats honest_stats = run_simulation(all_honest);
  check(honest_stats.resolved_cutoff == 1.0, "all-honest cutoff should resolve to 1");
  check(honest_stats.young_coop_rate == 1.0, "all-honest young must always cooperate");
  check(honest_stats.old_coop_rate == 1.0, "all-honest old must always cooperate");
  check(honest_stats.stigma_prevalence_old == 0.0 &&
            honest_stats.stigma_acquisition_rate == 0.0,
        "stigma must never appear without strategic agents");
  const VerificationReport honest_report = compare_to_theory(honest_stats, all_honest);
  check(honest_report.passed, "all-honest verification failed");
  int starved = 0;
  for (const TheoryLine& line : honest_report.lines) {
    if (line.status == LineStatus::InsufficientSamples) {
      ++starved;
    } else {
      check(line.z == 0.0, line.name + " deviates in the all-honest run");
    }
  }
  check(starved == 2, "exactly the two payoff lines should lack samples");

  SimConfig none_honest{ModelParams(0.0, 1.5, 0.0)};
  none_honest.cohort_size = 20000;
  none_honest.periods = 10;
  none_honest.burn_in = 2;
  none_honest.seed = 11;
  none_honest.strategy = SelectionPolicy::InteriorIfExists;
  const SimStats none_stats = run_simulation(none_honest);
  check(none_stats.resolved_cutoff == 0.0, "no-honest cutoff should resolve to 0");
  check(none_stats.young_coop_rate <= 1e-9, "no-honest young must defect");
  check(none_stats.old_coop_rate == 0.0, "no-honest old must defect");
  check(none_stats.stigma_prevalence_old == 0.0,
        "stigma needs a cooperating victim, so none can appear");
  const VerificationReport none_report = compare_to_theory(none_stats, none_honest);
  check(none_report.passed, "no-honest verification failed");
  return "all-honest run: rates exactly 1, stigma 0; no-honest run: rates exactly 0";
}

// --- 10: identical seeds reproduce identical bytes -------------------------

std::string criterion_deterministic_replay(AcceptanceMode) {
  SimConfig cfg{ModelParams(0.55, 2.5, 0.0)};
  cfg.cohort_size = 10000;
  cfg.periods = 20;
  cfg.burn_in = 2;
  cfg.seed = 42;
  cfg.strategy = SelectionPolicy::InteriorIfExists;
  const OutputMeta meta{"replay-check", false};
  const SimStats first = run_simulation(cfg);
  const SimStats second = run_simulation(cfg);
  const std::string json_a =
      to_pretty_json(simulate_report_json(cfg, first, compare_to_theory(first, cfg), meta));
  const std::string json_b = to_pretty_json(
      simulate_report_json(cfg, second, compare_to_theory(second, cfg), meta));
  check(json_a == json_b, "two runs with the same seed produced different bytes");

  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(k / 100.0);
  const std::string csv_seq = sweep_to_csv(sweep(2.5, 0.1, grid), meta);
  const std::string csv_par = sweep_to_csv(sweep_parallel(2.5, 0.1, grid, 4), meta);
  check(csv_seq == csv_par, "parallel sweep bytes differ from the sequential sweep");
  return "simulation JSON (" + std::to_string(json_a.size()) +
         " bytes) and sweep CSV (" + std::to_string(csv_seq.size()) +
         " bytes) replay identically";
}

// --- 11: the knife-edge continuum is detected, not mistaken ----------------

std::string criterion_continuum_detection(AcceptanceMode) {
  for (const auto& [pi, alpha] : std::vector<std::pair<double, double>>{
           {0.5, 0.0}, {0.625, 0.2}}) {
    const ModelParams params(pi, 2.0, alpha);
    const EquilibriumSet set = enumerate_equilibria(params);
    check(set.continuum, "continuum missed at pi = " + fmt(pi));
    check(set.min_cutoff() == 0.0 && set.max_cutoff() == 1.0,
          "continuum must span the whole cutoff range");
    check(classify_regime(params).regime == Regime::Continuum,
          "continuum regime mislabeled");
    for (int i = 0; i <= 10; ++i) {
      const double ell = i / 10.0;
      const BestResponse br = best_response_cutoff(ell, params);
      check(std::abs(br.clamped - ell) <= 1e-10,
            "best response should fix every cutoff on the continuum");
    }
  }
  const ModelParams near_miss(0.500001, 2.0, 0.0);
  const EquilibriumSet off = enumerate_equilibria(near_miss);
  check(!off.continuum, "perturbed knife-edge point wrongly labeled a continuum");
  check(off.equilibria.size() == 1, "perturbed point should hold a unique equilibrium");
  return "continuum found at the two knife-edge points, absent at the perturbed one";
}

struct CriterionDef {
  int id;
  const char* name;
  double budget_seconds;
  std::string (*body)(AcceptanceMode);
};

constexpr CriterionDef kCriteria[] = {
    {1, "unique-regime-curve", 1.0, criterion_unique_regime_curve},
    {2, "multi-equilibrium-band", 1.0, criterion_multi_equilibrium_band},
    {3, "closed-form-vs-bisection", 5.0, criterion_closed_form_vs_bisection},
    {4, "dominance-boundary", 2.0, criterion_dominance_boundary},
    {5, "threshold-monotonicity", 2.0, criterion_threshold_monotonicity},
    {6, "selection-decline-witness", 1.0, criterion_selection_decline_witness},
    {7, "forgiveness-never-helps", 5.0, criterion_forgiveness_never_helps},
    {8, "simulation-matches-theory", 60.0, criterion_simulation_matches_theory},
    {9, "degenerate-populations", 5.0, criterion_degenerate_populations},
    {10, "deterministic-replay", 60.0, criterion_deterministic_replay},
    {11, "continuum-detection", 1.0, criterion_continuum_detection},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(AcceptanceMode mode) {
  std::vector<CriterionResult> results;
  results.reserve(std::size(kCriteria));
  for (const CriterionDef& def : kCriteria) {
    CriterionResult result;
    result.id = def.id;
    result.name = def.name;
    result.budget_seconds = def.budget_seconds;
    const auto start = std::chrono::steady_clock::now();
    try {
      result.detail = def.body(mode);
      result.passed = true;
    } catch (const std::exception& e) {
      result.detail = e.what();
      result.passed = false;
    }
    const auto stop = std::chrono::steady_clock::now();
    result.seconds = std::chrono::duration<double>(stop - start).count();
    if (result.passed && result.seconds > result.budget_seconds) {
      result.passed = false;
      result.detail = "over budget: " + fmt(result.seconds) + "s > " +
                      fmt(result.budget_seconds) + "s; " + result.detail;
    }
    results.push_back(result);
  }
  return results;
}

}  // namespace stigma
