#ifndef STIGMA_SIMULATOR_HPP
#define STIGMA_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "stigma/model.hpp"
#include "stigma/rng.hpp"

namespace stigma {

enum class Group { A, B };
enum class AgentKind { Honest, Strategic };

/** Old-partner branch a young agent faced in its single young-period match. */
enum class PartnerBranch { None, Honest, StrategicClear, StrategicStigmatized };

struct AgentRecord {
  std::uint64_t id = 0;
  Group group = Group::A;
  AgentKind kind = AgentKind::Strategic;
  double loss = 0.0;  // own loss when cooperating against a defector
  bool stigmatized = false;
  double lifetime_payoff = 0.0;
  PartnerBranch young_partner = PartnerBranch::None;
  std::int64_t birth_period = 0;  // seeded old agents carry -1
};

enum class SelectionPolicy { MinEquilibrium, MaxEquilibrium, InteriorIfExists };

struct SimConfig {
  ModelParams params;
  std::uint32_t cohort_size = 1000;
  std::uint32_t periods = 50;
  std::uint32_t burn_in = 2;  // periods dropped from every aggregate
  std::uint64_t seed = 1;
  // Either a fixed cutoff in [0, 1] or a rule picking one equilibrium.
  std::variant<double, SelectionPolicy> strategy = SelectionPolicy::InteriorIfExists;
  double marginal_band = 0.005;  // loss half-window around the cutoff for payoff checks

  void validate() const;  // throws std::invalid_argument on a bad knob
};

/**
 * Cutoff the strategic side plays: the explicit value when one is given,
 * otherwise the selected equilibrium cutoff. A continuum resolves to 0 / 1 /
 * 0.5 under min / max / interior selection; interior selection without an
 * interior equilibrium falls back to the highest equilibrium cutoff. An
 * all-honest population plays 1 (no strategic agent exists to apply it).
 */
double resolve_cutoff(const SimConfig& cfg);

struct PeriodStats {
  std::uint32_t period = 0;
  std::uint64_t matches = 0;                 // young-old pairs played
  double young_coop_rate = 0.0;              // young cooperations / young matches
  double young_coop_rate_given_clear = 0.0;  // restricted to clear old partners
  double old_coop_rate = 0.0;
  double stigma_prevalence_old = 0.0;  // among olds at the start of the period
  std::uint64_t stigma_acquired = 0;   // flags set during the period
};

/** Lifetime-payoff sums for marginal agents, split by young-match branch. */
struct MarginalStratum {
  std::uint64_t n_honest = 0;
  double sum_honest = 0.0;
  double sumsq_honest = 0.0;
  std::uint64_t n_strategic_clear = 0;
  double sum_strategic_clear = 0.0;
  double sumsq_strategic_clear = 0.0;
};

struct SimStats {
  double resolved_cutoff = 0.0;
  std::uint64_t matches_total = 0;  // young matches inside the stat window
  double young_coop_rate = 0.0;
  double young_coop_rate_given_clear = 0.0;
  double old_coop_rate = 0.0;
  double stigma_prevalence_old = 0.0;
  double stigma_acquisition_rate = 0.0;  // flags per young agent
  std::uint64_t n_young_matches = 0;
  std::uint64_t n_young_clear_matches = 0;
  std::uint64_t n_old_obs = 0;
  double mean_payoff_honest_young = 0.0;
  double mean_payoff_strategic_young = 0.0;
  double mean_payoff_honest_old = 0.0;
  double mean_payoff_strategic_old = 0.0;
  std::uint64_t n_honest_young = 0;
  std::uint64_t n_strategic_young = 0;
  std::uint64_t n_honest_old = 0;
  std::uint64_t n_strategic_old = 0;
  // Retired strategic agents whose loss fell within marginal_band of the
  // cutoff: just below (cooperators) and just above (defectors).
  MarginalStratum below;
  MarginalStratum above;
  std::vector<PeriodStats> period_series;  // every period, burn-in included
};

/** Deterministic for a fixed config: same seed, same bytes out. */
SimStats run_simulation(const SimConfig& cfg);

enum class LineStatus { Pass, Fail, InsufficientSamples };

struct TheoryLine {
  std::string name;
  double theory = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  double z = 0.0;  // |empirical - theory| / se; 0 when both match exactly
  std::uint64_t n = 0;
  LineStatus status = LineStatus::Pass;
};

struct VerificationReport {
  std::vector<TheoryLine> lines;
  double z_threshold = 0.0;
  bool passed = true;  // no Fail line; InsufficientSamples lines don't count
};

/**
 * Stationary-theory checks against a finished run: young cooperation rates
 * (conditional on a clear partner and unconditional), stigma prevalence, and
 * the two marginal lifetime payoffs. Payoff lines reweight the young-match
 * branches by their population shares, so they estimate the two comparison
 * payoffs exactly rather than the stigma-tilted raw mean. A line with under
 * 100 observations in a needed stratum reports InsufficientSamples; if every
 * line is starved the report is unusable and InsufficientSamplesError is
 * thrown.
 */
VerificationReport compare_to_theory(const SimStats& stats, const SimConfig& cfg,
                                     double z_threshold = 4.0);

}  // namespace stigma

#endif  // STIGMA_SIMULATOR_HPP
