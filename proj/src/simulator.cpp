#include "stigma/simulator.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "stigma/equilibrium.hpp"
#include "stigma/errors.hpp"

namespace stigma {

namespace {

void sim_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("simulation invariant violated: ") + what);
}

AgentRecord spawn_agent(SplitMix64& rng, const SimConfig& cfg, Group group,
                        std::int64_t birth, std::uint64_t& next_id) {
  AgentRecord a;
  a.id = next_id++;
  a.group = group;
  a.kind = rng.bernoulli(cfg.params.pi) ? AgentKind::Honest : AgentKind::Strategic;
  a.loss = cfg.params.cost_distribution.sample(rng);
  a.birth_period = birth;
  return a;
}

std::vector<AgentRecord> spawn_cohort(SplitMix64& rng, const SimConfig& cfg, Group group,
                                      std::int64_t birth, std::uint64_t& next_id) {
  std::vector<AgentRecord> cohort;
  cohort.reserve(cfg.cohort_size);
  for (std::uint32_t i = 0; i < cfg.cohort_size; ++i) {
    cohort.push_back(spawn_agent(rng, cfg, group, birth, next_id));
  }
  return cohort;
}

std::vector<std::uint32_t> random_permutation(std::uint32_t n, SplitMix64& rng) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) {  // Fisher-Yates, top down
    std::uint64_t j = rng.next_below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

Action young_action(const AgentRecord& young, const AgentRecord& old_partner,
                    double cutoff) {
  if (old_partner.stigmatized) return Action::Defect;  // everyone shuns a flagged partner
  if (young.kind == AgentKind::Honest) return Action::Cooperate;
  return young.loss <= cutoff ? Action::Cooperate : Action::Defect;
}

struct PeriodAccum {
  std::uint64_t young_matches = 0;
  std::uint64_t young_coops = 0;
  std::uint64_t young_clear_matches = 0;
  std::uint64_t young_clear_coops = 0;
  std::uint64_t old_obs = 0;
  std::uint64_t old_coops = 0;
  std::uint64_t stigma_at_start = 0;
  std::uint64_t stigma_acquired = 0;
  double payoff_honest_young = 0.0;
  double payoff_strategic_young = 0.0;
  double payoff_honest_old = 0.0;
  double payoff_strategic_old = 0.0;
  std::uint64_t n_honest_young = 0;
  std::uint64_t n_strategic_young = 0;
  std::uint64_t n_honest_old = 0;
  std::uint64_t n_strategic_old = 0;
};

struct State {
  std::vector<AgentRecord> young_a, young_b, old_a, old_b;
  SplitMix64 rng;
  double cutoff = 0.0;
  std::uint32_t period = 0;
  std::uint64_t next_id = 0;

  explicit State(std::uint64_t seed) : rng(derive_stream_seed(seed, 0)) {}
};

void play_side(std::vector<AgentRecord>& young, std::vector<AgentRecord>& old_side,
               const std::vector<std::uint32_t>& perm, const SimConfig& cfg,
               double cutoff, PeriodAccum& acc) {
  sim_check(young.size() == old_side.size(), "cohort sizes diverged");
  const double b = cfg.params.b;
  for (std::size_t i = 0; i < young.size(); ++i) {
    AgentRecord& y = young[i];
    AgentRecord& o = old_side[perm[i]];
    sim_check(!y.stigmatized, "young agent flagged before its match");
    sim_check(y.group != o.group, "match paired agents from the same group");
    const Action ya = young_action(y, o, cutoff);
    const Action oa = o.kind == AgentKind::Honest ? Action::Cooperate : Action::Defect;
    const StagePayoffs p = stage_payoffs(ya, oa, y.loss, o.loss, cfg.params);
    double expected_sum = 0.0;
    if (ya == Action::Cooperate && oa == Action::Cooperate) expected_sum = 2.0;
    if (ya == Action::Cooperate && oa == Action::Defect) expected_sum = b - y.loss;
    if (ya == Action::Defect && oa == Action::Cooperate) expected_sum = b - o.loss;
    sim_check(std::abs(p.row_payoff + p.col_payoff - expected_sum) <= 1e-12,
              "stage payoffs do not conserve");
    y.lifetime_payoff += p.row_payoff;
    o.lifetime_payoff += p.col_payoff;
    y.young_partner = o.kind == AgentKind::Honest
                          ? PartnerBranch::Honest
                          : (o.stigmatized ? PartnerBranch::StrategicStigmatized
                                           : PartnerBranch::StrategicClear);
    if (ya == Action::Defect && oa == Action::Cooperate) {
      sim_check(y.kind == AgentKind::Strategic, "honest young flagged for defection");
      y.stigmatized = true;
      acc.stigma_acquired += 1;
    }
    acc.young_matches += 1;
    acc.old_obs += 1;
    if (ya == Action::Cooperate) acc.young_coops += 1;
    if (!o.stigmatized) {
      acc.young_clear_matches += 1;
      if (ya == Action::Cooperate) acc.young_clear_coops += 1;
    }
    if (oa == Action::Cooperate) acc.old_coops += 1;
    if (y.kind == AgentKind::Honest) {
      acc.payoff_honest_young += p.row_payoff;
      acc.n_honest_young += 1;
    } else {
      acc.payoff_strategic_young += p.row_payoff;
      acc.n_strategic_young += 1;
    }
    if (o.kind == AgentKind::Honest) {
      acc.payoff_honest_old += p.col_payoff;
      acc.n_honest_old += 1;
    } else {
      acc.payoff_strategic_old += p.col_payoff;
      acc.n_strategic_old += 1;
    }
  }
}

void fold_retiree(const AgentRecord& a, const SimConfig& cfg, double cutoff,
                  SimStats& stats) {
  if (a.birth_period < static_cast<std::int64_t>(cfg.burn_in)) return;
  if (a.kind != AgentKind::Strategic) return;
  MarginalStratum* stratum = nullptr;
  if (a.loss > cutoff - cfg.marginal_band && a.loss <= cutoff) {
    stratum = &stats.below;
  } else if (a.loss > cutoff && a.loss <= cutoff + cfg.marginal_band) {
    stratum = &stats.above;
  }
  if (stratum == nullptr) return;
  const double v = a.lifetime_payoff;
  switch (a.young_partner) {
    case PartnerBranch::Honest:
      stratum->n_honest += 1;
      stratum->sum_honest += v;
      stratum->sumsq_honest += v * v;
      break;
    case PartnerBranch::StrategicClear:
      stratum->n_strategic_clear += 1;
      stratum->sum_strategic_clear += v;
      stratum->sumsq_strategic_clear += v * v;
      break;
    default:
      // A flagged partner forces the same defect-defect play on both sides of
      // the cutoff; dropping the branch and reweighting the other two keeps
      // the estimator aligned with the clear-partner comparison payoffs.
      break;
  }
}

void age_and_respawn(State& st, const SimConfig& cfg, SimStats& stats) {
  for (const AgentRecord& a : st.old_a) fold_retiree(a, cfg, st.cutoff, stats);
  for (const AgentRecord& a : st.old_b) fold_retiree(a, cfg, st.cutoff, stats);
  const double alpha = cfg.params.alpha;
  for (AgentRecord& a : st.young_a) {
    if (a.stigmatized && st.rng.bernoulli(alpha)) a.stigmatized = false;
  }
  for (AgentRecord& a : st.young_b) {
    if (a.stigmatized && st.rng.bernoulli(alpha)) a.stigmatized = false;
  }
  st.old_b = std::move(st.young_a);  // aging swaps the group
  for (AgentRecord& a : st.old_b) a.group = Group::B;
  st.old_a = std::move(st.young_b);
  for (AgentRecord& a : st.old_a) a.group = Group::A;
  const std::int64_t birth = static_cast<std::int64_t>(st.period) + 1;
  st.young_a = spawn_cohort(st.rng, cfg, Group::A, birth, st.next_id);
  st.young_b = spawn_cohort(st.rng, cfg, Group::B, birth, st.next_id);
}

PeriodAccum step_period(State& st, const SimConfig& cfg, SimStats& stats) {
  PeriodAccum acc;
  for (const std::vector<AgentRecord>* olds : {&st.old_a, &st.old_b}) {
    for (const AgentRecord& a : *olds) {
      if (a.kind == AgentKind::Honest) {
        sim_check(!a.stigmatized, "honest agent carries stigma");
      }
      if (a.stigmatized) acc.stigma_at_start += 1;
    }
  }
  const std::vector<std::uint32_t> perm_a = random_permutation(cfg.cohort_size, st.rng);
  const std::vector<std::uint32_t> perm_b = random_permutation(cfg.cohort_size, st.rng);
  play_side(st.young_a, st.old_b, perm_a, cfg, st.cutoff, acc);
  play_side(st.young_b, st.old_a, perm_b, cfg, st.cutoff, acc);
  age_and_respawn(st, cfg, stats);
  st.period += 1;
  return acc;
}

double ratio(double num, std::uint64_t den) {
  return den == 0 ? 0.0 : num / static_cast<double>(den);
}

}  // namespace

void SimConfig::validate() const {
  if (cohort_size < 1) throw std::invalid_argument("cohort_size must be at least 1");
  if (periods < 1) throw std::invalid_argument("periods must be at least 1");
  if (burn_in >= periods) {
    throw std::invalid_argument("burn_in must be smaller than periods (got " +
                                std::to_string(burn_in) + " vs " + std::to_string(periods) +
                                ")");
  }
  if (!(marginal_band > 0.0 && marginal_band <= 0.5)) {
    throw std::invalid_argument("marginal_band must lie in (0, 0.5] (got " +
                                std::to_string(marginal_band) + ")");
  }
  if (const double* c = std::get_if<double>(&strategy)) {
    if (!(*c >= 0.0 && *c <= 1.0)) {
      throw std::invalid_argument("cutoff must lie in [0, 1] (got " + std::to_string(*c) +
                                  ")");
    }
  }
}

double resolve_cutoff(const SimConfig& cfg) {
  if (const double* c = std::get_if<double>(&cfg.strategy)) return *c;
  if (cfg.params.pi >= 1.0) return 1.0;  // no strategic agent ever applies it
  const SelectionPolicy policy = std::get<SelectionPolicy>(cfg.strategy);
  const EquilibriumSet set = enumerate_equilibria(cfg.params);
  if (set.continuum) {
    switch (policy) {
      case SelectionPolicy::MinEquilibrium: return 0.0;
      case SelectionPolicy::MaxEquilibrium: return 1.0;
      case SelectionPolicy::InteriorIfExists: return 0.5;
    }
  }
  switch (policy) {
    case SelectionPolicy::MinEquilibrium: return set.min_cutoff();
    case SelectionPolicy::MaxEquilibrium: return set.max_cutoff();
    case SelectionPolicy::InteriorIfExists: break;
  }
  for (const ThresholdEquilibrium& eq : set.equilibria) {
    if (eq.kind == EquilibriumKind::Interior) return eq.cutoff;
  }
  return set.max_cutoff();
}

SimStats run_simulation(const SimConfig& cfg) {
  cfg.validate();
  SimStats stats;
  State st(cfg.seed);
  st.cutoff = resolve_cutoff(cfg);
  stats.resolved_cutoff = st.cutoff;
  st.young_a = spawn_cohort(st.rng, cfg, Group::A, 0, st.next_id);
  st.young_b = spawn_cohort(st.rng, cfg, Group::B, 0, st.next_id);
  st.old_a = spawn_cohort(st.rng, cfg, Group::A, -1, st.next_id);
  st.old_b = spawn_cohort(st.rng, cfg, Group::B, -1, st.next_id);

  std::uint64_t young_matches = 0, young_coops = 0;
  std::uint64_t clear_matches = 0, clear_coops = 0;
  std::uint64_t old_obs = 0, old_coops = 0;
  std::uint64_t stigma_seen = 0, stigma_old_obs = 0, stigma_acquired = 0;
  double pay_hy = 0.0, pay_sy = 0.0, pay_ho = 0.0, pay_so = 0.0;
  std::uint64_t n_hy = 0, n_sy = 0, n_ho = 0, n_so = 0;

  stats.period_series.reserve(cfg.periods);
  for (std::uint32_t t = 0; t < cfg.periods; ++t) {
    const std::uint64_t olds_now = st.old_a.size() + st.old_b.size();
    const PeriodAccum acc = step_period(st, cfg, stats);
    PeriodStats ps;
    ps.period = t;
    ps.matches = acc.young_matches;
    ps.young_coop_rate = ratio(static_cast<double>(acc.young_coops), acc.young_matches);
    ps.young_coop_rate_given_clear =
        ratio(static_cast<double>(acc.young_clear_coops), acc.young_clear_matches);
    ps.old_coop_rate = ratio(static_cast<double>(acc.old_coops), acc.old_obs);
    ps.stigma_prevalence_old = ratio(static_cast<double>(acc.stigma_at_start), olds_now);
    ps.stigma_acquired = acc.stigma_acquired;
    stats.period_series.push_back(ps);
    if (t < cfg.burn_in) continue;
    young_matches += acc.young_matches;
    young_coops += acc.young_coops;
    clear_matches += acc.young_clear_matches;
    clear_coops += acc.young_clear_coops;
    old_obs += acc.old_obs;
    old_coops += acc.old_coops;
    stigma_seen += acc.stigma_at_start;
    stigma_old_obs += olds_now;
    stigma_acquired += acc.stigma_acquired;
    pay_hy += acc.payoff_honest_young;
    pay_sy += acc.payoff_strategic_young;
    pay_ho += acc.payoff_honest_old;
    pay_so += acc.payoff_strategic_old;
    n_hy += acc.n_honest_young;
    n_sy += acc.n_strategic_young;
    n_ho += acc.n_honest_old;
    n_so += acc.n_strategic_old;
  }

  stats.matches_total = young_matches;
  stats.n_young_matches = young_matches;
  stats.n_young_clear_matches = clear_matches;
  stats.n_old_obs = stigma_old_obs;
  stats.young_coop_rate = ratio(static_cast<double>(young_coops), young_matches);
  stats.young_coop_rate_given_clear =
      ratio(static_cast<double>(clear_coops), clear_matches);
  stats.old_coop_rate = ratio(static_cast<double>(old_coops), old_obs);
  stats.stigma_prevalence_old = ratio(static_cast<double>(stigma_seen), stigma_old_obs);
  stats.stigma_acquisition_rate =
      ratio(static_cast<double>(stigma_acquired), young_matches);
  stats.mean_payoff_honest_young = ratio(pay_hy, n_hy);
  stats.mean_payoff_strategic_young = ratio(pay_sy, n_sy);
  stats.mean_payoff_honest_old = ratio(pay_ho, n_ho);
  stats.mean_payoff_strategic_old = ratio(pay_so, n_so);
  stats.n_honest_young = n_hy;
  stats.n_strategic_young = n_sy;
  stats.n_honest_old = n_ho;
  stats.n_strategic_old = n_so;
  return stats;
}

namespace {

constexpr std::uint64_t kMinLineObs = 100;

TheoryLine rate_line(std::string name, double theory, double phat, std::uint64_t n,
                     double z_threshold) {
  TheoryLine line;
  line.name = std::move(name);
  line.theory = theory;
  line.empirical = phat;
  line.n = n;
  line.se = n == 0 ? 0.0 : std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
  const double diff = std::abs(phat - theory);
  if (line.se > 0.0) {
    line.z = diff / line.se;
  } else {
    line.z = diff == 0.0 ? 0.0 : 1e300;
  }
  if (n < kMinLineObs) {
    line.status = LineStatus::InsufficientSamples;
  } else {
    line.status = line.z <= z_threshold ? LineStatus::Pass : LineStatus::Fail;
  }
  return line;
}

struct BranchMean {
  double mean = 0.0;
  double var = 0.0;
  std::uint64_t n = 0;
};

BranchMean branch_mean(std::uint64_t n, double sum, double sumsq) {
  BranchMean m;
  m.n = n;
  if (n == 0) return m;
  m.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double num = sumsq - sum * sum / static_cast<double>(n);
    m.var = num > 0.0 ? num / static_cast<double>(n - 1) : 0.0;
  }
  return m;
}

TheoryLine stratified_payoff_line(std::string name, double theory,
                                  const MarginalStratum& stratum, double pi,
                                  double z_threshold) {
  TheoryLine line;
  line.name = std::move(name);
  line.theory = theory;
  const BranchMean honest = branch_mean(stratum.n_honest, stratum.sum_honest,
                                        stratum.sumsq_honest);
  const BranchMean strategic = branch_mean(stratum.n_strategic_clear,
                                           stratum.sum_strategic_clear,
                                           stratum.sumsq_strategic_clear);
  line.n = honest.n + strategic.n;
  bool starved = false;
  double emp = 0.0, var = 0.0;
  if (pi > 0.0) {
    if (honest.n < kMinLineObs) starved = true;
    emp += pi * honest.mean;
    if (honest.n > 0) var += pi * pi * honest.var / static_cast<double>(honest.n);
  }
  if (pi < 1.0) {
    if (strategic.n < kMinLineObs) starved = true;
    emp += (1.0 - pi) * strategic.mean;
    if (strategic.n > 0) {
      var += (1.0 - pi) * (1.0 - pi) * strategic.var / static_cast<double>(strategic.n);
    }
  }
  line.empirical = emp;
  line.se = std::sqrt(var);
  const double diff = std::abs(emp - theory);
  if (line.se > 0.0) {
    line.z = diff / line.se;
  } else {
    line.z = diff == 0.0 ? 0.0 : 1e300;
  }
  if (starved) {
    line.status = LineStatus::InsufficientSamples;
  } else {
    line.status = line.z <= z_threshold ? LineStatus::Pass : LineStatus::Fail;
  }
  return line;
}

}  // namespace

VerificationReport compare_to_theory(const SimStats& stats, const SimConfig& cfg,
                                     double z_threshold) {
  const ModelParams& p = cfg.params;
  const double c = stats.resolved_cutoff;
  const double big_f = p.cost_distribution.cdf(c);
  const double coop_prob = meeting_coop_prob(c, p);
  const double stigma = (1.0 - p.pi) * p.pi * (1.0 - big_f) * (1.0 - p.alpha);

  VerificationReport report;
  report.z_threshold = z_threshold;
  report.lines.push_back(rate_line("young_coop_rate_given_clear", coop_prob,
                                   stats.young_coop_rate_given_clear,
                                   stats.n_young_clear_matches, z_threshold));
  report.lines.push_back(rate_line("young_coop_rate_unconditional",
                                   (1.0 - stigma) * coop_prob, stats.young_coop_rate,
                                   stats.n_young_matches, z_threshold));
  report.lines.push_back(rate_line("stigma_prevalence_old", stigma,
                                   stats.stigma_prevalence_old, stats.n_old_obs,
                                   z_threshold));
  report.lines.push_back(stratified_payoff_line("marginal_payoff_below_cutoff",
                                                coop_payoff(c, c, p), stats.below, p.pi,
                                                z_threshold));
  report.lines.push_back(stratified_payoff_line("marginal_payoff_above_cutoff",
                                                defect_payoff(c, p), stats.above, p.pi,
                                                z_threshold));

  std::size_t starved = 0;
  for (const TheoryLine& line : report.lines) {
    if (line.status == LineStatus::InsufficientSamples) starved += 1;
    if (line.status == LineStatus::Fail) report.passed = false;
  }
  if (starved == report.lines.size()) {
    throw InsufficientSamplesError(
        "every theory line is short of observations; enlarge the run");
  }
  return report;
}

}  // namespace stigma
