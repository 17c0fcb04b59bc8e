#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stigma/errors.hpp"
#include "stigma/simulator.hpp"

using namespace stigma;

namespace {

SimConfig base_config(double pi, double b, double alpha) {
  SimConfig cfg{ModelParams(pi, b, alpha)};
  cfg.cohort_size = 2000;
  cfg.periods = 10;
  cfg.burn_in = 2;
  cfg.seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("config validation rejects bad knobs") {
  SimConfig cfg = base_config(0.4, 1.5, 0.0);
  cfg.cohort_size = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config(0.4, 1.5, 0.0);
  cfg.burn_in = 10;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config(0.4, 1.5, 0.0);
  cfg.marginal_band = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config(0.4, 1.5, 0.0);
  cfg.strategy = 1.2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.strategy = 0.9;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("cutoff resolution follows the selection policy") {
  SimConfig cfg = base_config(0.55, 2.5, 0.0);  // overlap band: {0, 0.407..., 1}
  cfg.strategy = SelectionPolicy::MinEquilibrium;
  CHECK(resolve_cutoff(cfg) == 0.0);
  cfg.strategy = SelectionPolicy::MaxEquilibrium;
  CHECK(resolve_cutoff(cfg) == 1.0);
  cfg.strategy = SelectionPolicy::InteriorIfExists;
  CHECK(resolve_cutoff(cfg) == doctest::Approx(0.4074074074074074).epsilon(1e-12));

  SimConfig knife = base_config(0.5, 2.0, 0.0);  // continuum
  knife.strategy = SelectionPolicy::MinEquilibrium;
  CHECK(resolve_cutoff(knife) == 0.0);
  knife.strategy = SelectionPolicy::MaxEquilibrium;
  CHECK(resolve_cutoff(knife) == 1.0);
  knife.strategy = SelectionPolicy::InteriorIfExists;
  CHECK(resolve_cutoff(knife) == 0.5);

  SimConfig corner = base_config(0.2, 1.5, 0.0);  // unique all-defect corner
  corner.strategy = SelectionPolicy::InteriorIfExists;
  CHECK(resolve_cutoff(corner) == 0.0);

  SimConfig edge = base_config(0.5, 3.0, 0.0);  // two corners, no interior
  edge.strategy = SelectionPolicy::InteriorIfExists;
  CHECK(resolve_cutoff(edge) == 1.0);

  SimConfig honest = base_config(1.0, 1.5, 0.0);
  honest.strategy = SelectionPolicy::InteriorIfExists;
  CHECK(resolve_cutoff(honest) == 1.0);

  SimConfig fixed = base_config(0.4, 1.5, 0.0);
  fixed.strategy = 0.25;
  CHECK(resolve_cutoff(fixed) == 0.25);
}

TEST_CASE("identical seeds give identical statistics") {
  const SimConfig cfg = base_config(0.4, 1.5, 0.0);
  const SimStats a = run_simulation(cfg);
  const SimStats b = run_simulation(cfg);
  CHECK(a.resolved_cutoff == b.resolved_cutoff);
  CHECK(a.young_coop_rate == b.young_coop_rate);
  CHECK(a.young_coop_rate_given_clear == b.young_coop_rate_given_clear);
  CHECK(a.stigma_prevalence_old == b.stigma_prevalence_old);
  CHECK(a.below.sum_honest == b.below.sum_honest);
  CHECK(a.above.sum_strategic_clear == b.above.sum_strategic_clear);
  REQUIRE(a.period_series.size() == b.period_series.size());
  for (std::size_t i = 0; i < a.period_series.size(); ++i) {
    CHECK(a.period_series[i].young_coop_rate == b.period_series[i].young_coop_rate);
    CHECK(a.period_series[i].stigma_prevalence_old ==
          b.period_series[i].stigma_prevalence_old);
  }
  SimConfig other = cfg;
  other.seed = 2;
  const SimStats c = run_simulation(other);
  CHECK(a.young_coop_rate != c.young_coop_rate);  // different stream, different path
}

TEST_CASE("initial cohorts hit the honest share within sampling error") {
  SimConfig cfg = base_config(0.4, 1.5, 0.0);
  cfg.cohort_size = 10000;
  cfg.periods = 1;
  cfg.burn_in = 0;
  cfg.strategy = 1.0 / 6.0;
  const SimStats stats = run_simulation(cfg);
  const double share =
      static_cast<double>(stats.n_honest_young) / static_cast<double>(stats.n_young_matches);
  CHECK(std::abs(share - 0.4) <= 4.0 * std::sqrt(0.4 * 0.6 / 20000.0));
}

TEST_CASE("no stigma exists before the first flags are assigned") {
  SimConfig cfg = base_config(0.4, 1.5, 0.0);
  cfg.periods = 3;
  cfg.burn_in = 0;
  cfg.strategy = 1.0 / 6.0;
  const SimStats stats = run_simulation(cfg);
  CHECK(stats.period_series[0].stigma_prevalence_old == 0.0);
  CHECK(stats.period_series[1].stigma_prevalence_old > 0.0);
}

TEST_CASE("one aging step carries the predicted stigma mass") {
  // flags per cohort: (1 - pi) * pi * (1 - F(cutoff)) = 0.6 * 0.4 * 5/6 = 0.2
  double total = 0.0;
  const int reps = 500;
  for (int k = 0; k < reps; ++k) {
    SimConfig cfg = base_config(0.4, 1.5, 0.0);
    cfg.cohort_size = 200;
    cfg.periods = 2;
    cfg.burn_in = 0;
    cfg.seed = 1000 + k;
    cfg.strategy = 1.0 / 6.0;
    const SimStats stats = run_simulation(cfg);
    total += stats.period_series[1].stigma_prevalence_old;
  }
  CHECK(std::abs(total / reps - 0.2) <= 0.004);
}

TEST_CASE("mid-size run reproduces every stationary theory line") {
  SimConfig cfg = base_config(0.4, 1.5, 0.0);
  cfg.cohort_size = 20000;
  cfg.periods = 20;
  cfg.seed = 3;
  cfg.strategy = SelectionPolicy::InteriorIfExists;
  const SimStats stats = run_simulation(cfg);
  CHECK(stats.resolved_cutoff == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(std::abs(stats.young_coop_rate_given_clear - 0.5) <= 0.01);
  CHECK(std::abs(stats.young_coop_rate - 0.4) <= 0.01);
  CHECK(std::abs(stats.stigma_prevalence_old - 0.2) <= 0.01);
  CHECK(std::abs(stats.old_coop_rate - 0.4) <= 0.01);
  const VerificationReport report = compare_to_theory(stats, cfg);
  CHECK(report.passed);
  for (const TheoryLine& line : report.lines) {
    CHECK(line.status != LineStatus::Fail);
  }
}

TEST_CASE("verification targets the cutoff actually played, equilibrium or not") {
  SimConfig cfg = base_config(0.4, 1.5, 0.0);
  cfg.cohort_size = 20000;
  cfg.periods = 20;
  cfg.seed = 5;
  cfg.strategy = 0.9;  // far from the equilibrium cutoff 1/6
  const SimStats stats = run_simulation(cfg);
  CHECK(std::abs(stats.young_coop_rate_given_clear - 0.94) <= 0.01);
  const VerificationReport report = compare_to_theory(stats, cfg);
  CHECK(report.passed);
}

TEST_CASE("erasure scales the stationary stigma mass by 1 - alpha") {
  auto run_with_alpha = [](double alpha) {
    SimConfig cfg = base_config(0.4, 1.5, alpha);
    cfg.cohort_size = 20000;
    cfg.periods = 30;
    cfg.seed = 9;
    cfg.strategy = 1.0 / 6.0;
    return run_simulation(cfg);
  };
  const SimStats half = run_with_alpha(0.5);
  const SimStats quarter = run_with_alpha(0.75);
  CHECK(std::abs(half.stigma_prevalence_old - 0.1) <= 0.005);
  CHECK(std::abs(quarter.stigma_prevalence_old - 0.05) <= 0.005);
  CHECK(half.stigma_prevalence_old / quarter.stigma_prevalence_old ==
        doctest::Approx(2.0).epsilon(0.1));
  SimConfig cfg = base_config(0.4, 1.5, 0.5);
  cfg.cohort_size = 20000;
  cfg.periods = 30;
  cfg.seed = 9;
  cfg.strategy = 1.0 / 6.0;
  const VerificationReport report = compare_to_theory(run_simulation(cfg), cfg);
  CHECK(report.passed);
}

TEST_CASE("all-honest and no-honest populations are exact") {
  SimConfig honest = base_config(1.0, 1.5, 0.0);
  honest.periods = 6;
  const SimStats hs = run_simulation(honest);
  CHECK(hs.resolved_cutoff == 1.0);
  CHECK(hs.young_coop_rate == 1.0);
  CHECK(hs.old_coop_rate == 1.0);
  CHECK(hs.stigma_prevalence_old == 0.0);
  CHECK(hs.stigma_acquisition_rate == 0.0);
  CHECK(hs.n_strategic_young == 0);

  SimConfig strategic = base_config(0.0, 1.5, 0.0);
  strategic.periods = 6;
  const SimStats ss = run_simulation(strategic);
  CHECK(ss.resolved_cutoff == 0.0);
  CHECK(ss.young_coop_rate <= 1e-9);
  CHECK(ss.old_coop_rate == 0.0);
  CHECK(ss.stigma_prevalence_old == 0.0);
  CHECK(ss.n_honest_young == 0);
}

TEST_CASE("sampling error shrinks like one over the square root of the cohort") {
  const std::vector<std::uint32_t> sizes{1000, 10000, 100000};
  const std::vector<int> reps{48, 24, 12};
  std::vector<double> log_n, log_rmse;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    double sq_sum = 0.0;
    for (int k = 0; k < reps[s]; ++k) {
      SimConfig cfg = base_config(0.4, 1.5, 0.0);
      cfg.cohort_size = sizes[s];
      cfg.periods = 12;
      cfg.burn_in = 2;
      cfg.seed = 10000 * (s + 1) + k;
      cfg.strategy = 1.0 / 6.0;
      const SimStats stats = run_simulation(cfg);
      const double err = stats.stigma_prevalence_old - 0.2;
      sq_sum += err * err;
    }
    log_n.push_back(std::log10(static_cast<double>(sizes[s])));
    log_rmse.push_back(0.5 * std::log10(sq_sum / reps[s]));
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    mean_x += log_n[i];
    mean_y += log_rmse[i];
  }
  mean_x /= log_n.size();
  mean_y /= log_n.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    num += (log_n[i] - mean_x) * (log_rmse[i] - mean_y);
    den += (log_n[i] - mean_x) * (log_n[i] - mean_x);
  }
  const double slope = num / den;
  CHECK(std::abs(slope - (-0.5)) <= 0.15);
}

TEST_CASE("starved runs are flagged per line and rejected only when unusable") {
  SimConfig tiny = base_config(0.4, 1.5, 0.0);
  tiny.cohort_size = 10;
  tiny.periods = 3;
  tiny.burn_in = 0;
  tiny.strategy = 1.0 / 6.0;
  const SimStats tiny_stats = run_simulation(tiny);
  CHECK_THROWS_AS(compare_to_theory(tiny_stats, tiny), InsufficientSamplesError);

  SimConfig small = base_config(0.4, 1.5, 0.0);
  small.cohort_size = 200;
  small.periods = 5;
  small.burn_in = 1;
  small.strategy = 1.0 / 6.0;
  const SimStats small_stats = run_simulation(small);
  const VerificationReport report = compare_to_theory(small_stats, small);
  CHECK(report.passed);
  bool starved_payoff = false;
  for (const TheoryLine& line : report.lines) {
    if (line.status == LineStatus::InsufficientSamples) starved_payoff = true;
    CHECK(line.status != LineStatus::Fail);
  }
  CHECK(starved_payoff);
}

TEST_CASE("marginal strata collect both partner branches near the cutoff") {
  SimConfig cfg = base_config(0.4, 1.5, 0.0);
  cfg.cohort_size = 50000;
  cfg.periods = 12;
  cfg.seed = 21;
  cfg.strategy = 1.0 / 6.0;
  cfg.marginal_band = 0.02;
  const SimStats stats = run_simulation(cfg);
  CHECK(stats.below.n_honest > 100u);
  CHECK(stats.below.n_strategic_clear > 100u);
  CHECK(stats.above.n_honest > 100u);
  CHECK(stats.above.n_strategic_clear > 100u);
  // vs honest partners a cooperator keeps a clear old age (1 + 0.75) while a
  // flagged defector banks b once and nothing after (1.5)
  const double below_honest_mean =
      stats.below.sum_honest / static_cast<double>(stats.below.n_honest);
  const double above_honest_mean =
      stats.above.sum_honest / static_cast<double>(stats.above.n_honest);
  CHECK(below_honest_mean > above_honest_mean);
  CHECK(below_honest_mean == doctest::Approx(1.75).epsilon(0.05));
  CHECK(above_honest_mean == doctest::Approx(1.5).epsilon(0.05));
}
