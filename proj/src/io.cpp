#include "stigma/io.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace stigma {

std::string format_double(double x) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, res.ptr);
}

std::string kind_to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::CornerLow: return "corner_low";
    case EquilibriumKind::Interior: return "interior";
    case EquilibriumKind::CornerHigh: return "corner_high";
  }
  return "unknown";
}

std::string regime_to_string(Regime regime) {
  switch (regime) {
    case Regime::AllDefect: return "all_defect";
    case Regime::UniqueInterior: return "unique_interior";
    case Regime::AllCooperate: return "all_cooperate";
    case Regime::TripleEquilibrium: return "triple_equilibrium";
    case Regime::Continuum: return "continuum";
    case Regime::DominantCooperation: return "dominant_cooperation";
    case Regime::Vacuous: return "vacuous";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "all_defect") return Regime::AllDefect;
  if (name == "unique_interior") return Regime::UniqueInterior;
  if (name == "all_cooperate") return Regime::AllCooperate;
  if (name == "triple_equilibrium") return Regime::TripleEquilibrium;
  if (name == "continuum") return Regime::Continuum;
  if (name == "dominant_cooperation") return Regime::DominantCooperation;
  if (name == "vacuous") return Regime::Vacuous;
  throw std::invalid_argument("unknown regime name: " + name);
}

std::string status_to_string(LineStatus status) {
  switch (status) {
    case LineStatus::Pass: return "pass";
    case LineStatus::Fail: return "fail";
    case LineStatus::InsufficientSamples: return "insufficient_samples";
  }
  return "unknown";
}

std::string policy_to_string(SelectionPolicy policy) {
  switch (policy) {
    case SelectionPolicy::MinEquilibrium: return "min";
    case SelectionPolicy::MaxEquilibrium: return "max";
    case SelectionPolicy::InteriorIfExists: return "interior";
  }
  return "unknown";
}

namespace {

std::string iso_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void append_preamble(std::string& out, const OutputMeta& meta) {
  out += "# schema_version ";
  out += kSchemaVersion;
  out += '\n';
  out += "# build ";
  out += kBuildTag;
  out += '\n';
  out += "# command ";
  out += meta.command;
  out += '\n';
  if (meta.include_timestamp) {
    out += "# generated ";
    out += iso_timestamp_utc();
    out += '\n';
  }
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void append_row(std::string& out, const SweepRow& row) {
  out += format_double(row.pi);
  out += ',';
  out += format_double(row.b);
  out += ',';
  out += format_double(row.alpha);
  out += ',';
  out += opt_field(row.eq_low);
  out += ',';
  out += opt_field(row.eq_interior);
  out += ',';
  out += opt_field(row.eq_high);
  out += ',';
  out += row.continuum ? '1' : '0';
  out += ',';
  out += row.regime ? regime_to_string(*row.regime) : std::string();
  out += ',';
  out += opt_field(row.coop_min);
  out += ',';
  out += opt_field(row.coop_max);
  out += '\n';
}

std::vector<std::string> split_keep_empty(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& field, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad ") + what + " field: '" + field + "'");
  }
}

std::optional<double> parse_opt(const std::string& field, const char* what) {
  if (field.empty()) return std::nullopt;
  return parse_number(field, what);
}

}  // namespace

std::string sweep_to_csv(const std::vector<SweepRow>& rows, const OutputMeta& meta) {
  std::string out;
  append_preamble(out, meta);
  out += kSweepCsvHeader;
  out += '\n';
  for (const SweepRow& row : rows) append_row(out, row);
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  bool header_seen = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kSweepCsvHeader) {
        throw std::invalid_argument("unexpected sweep header: '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const std::vector<std::string> f = split_keep_empty(line, ',');
    if (f.size() != 10) {
      throw std::invalid_argument("expected 10 fields, got " + std::to_string(f.size()));
    }
    SweepRow row;
    row.pi = parse_number(f[0], "pi");
    row.b = parse_number(f[1], "b");
    row.alpha = parse_number(f[2], "alpha");
    row.eq_low = parse_opt(f[3], "eq_low");
    row.eq_interior = parse_opt(f[4], "eq_interior");
    row.eq_high = parse_opt(f[5], "eq_high");
    if (f[6] != "0" && f[6] != "1") {
      throw std::invalid_argument("bad continuum flag: '" + f[6] + "'");
    }
    row.continuum = f[6] == "1";
    if (!f[7].empty()) row.regime = regime_from_string(f[7]);
    if (row.regime == Regime::Vacuous) row.error = "vacuous";
    row.coop_min = parse_opt(f[8], "coop_min");
    row.coop_max = parse_opt(f[9], "coop_max");
    rows.push_back(row);
  }
  if (!header_seen) throw std::invalid_argument("sweep CSV has no header line");
  return rows;
}

namespace {

nlohmann::json provenance_json(const OutputMeta& meta) {
  nlohmann::json j;
  j["build"] = kBuildTag;
  j["command"] = meta.command;
  if (meta.include_timestamp) j["generated"] = iso_timestamp_utc();
  return j;
}

nlohmann::json params_json(const ModelParams& params) {
  nlohmann::json j;
  j["pi"] = params.pi;
  j["b"] = params.b;
  j["alpha"] = params.alpha;
  j["cost_distribution"] = params.cost_distribution.name();
  return j;
}

SweepRow row_from_solution(const ModelParams& params, const EquilibriumSet& set,
                           const RegimeClassification& classification) {
  SweepRow row;
  row.pi = params.pi;
  row.b = params.b;
  row.alpha = params.alpha;
  row.regime = classification.regime;
  row.continuum = set.continuum;
  if (!set.continuum) {
    for (const ThresholdEquilibrium& eq : set.equilibria) {
      switch (eq.kind) {
        case EquilibriumKind::CornerLow: row.eq_low = eq.cutoff; break;
        case EquilibriumKind::Interior: row.eq_interior = eq.cutoff; break;
        case EquilibriumKind::CornerHigh: row.eq_high = eq.cutoff; break;
      }
    }
  }
  row.coop_min = cooperation_probability(params.pi, set.min_cutoff());
  row.coop_max = cooperation_probability(params.pi, set.max_cutoff());
  return row;
}

}  // namespace

nlohmann::json solve_report_json(const ModelParams& params, const EquilibriumSet& set,
                                 const RegimeClassification& classification,
                                 const OutputMeta& meta) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["provenance"] = provenance_json(meta);
  j["params"] = params_json(params);
  j["continuum"] = set.continuum;
  nlohmann::json eqs = nlohmann::json::array();
  for (const ThresholdEquilibrium& eq : set.equilibria) {
    nlohmann::json e;
    e["cutoff"] = eq.cutoff;
    e["kind"] = kind_to_string(eq.kind);
    e["residual"] = eq.residual;
    eqs.push_back(e);
  }
  j["equilibria"] = eqs;
  j["regime"] = regime_to_string(classification.regime);
  j["regime_boundaries"] = {classification.boundaries.first,
                            classification.boundaries.second};
  j["cooperation"] = {
      {"min", cooperation_probability(params.pi, set.min_cutoff())},
      {"max", cooperation_probability(params.pi, set.max_cutoff())},
  };
  return j;
}

std::string solve_report_csv(const ModelParams& params, const EquilibriumSet& set,
                             const RegimeClassification& classification,
                             const OutputMeta& meta) {
  std::string out;
  append_preamble(out, meta);
  out += kSweepCsvHeader;
  out += '\n';
  append_row(out, row_from_solution(params, set, classification));
  return out;
}

namespace {

nlohmann::json stratum_json(const MarginalStratum& s) {
  nlohmann::json j;
  j["n_honest"] = s.n_honest;
  j["sum_honest"] = s.sum_honest;
  j["sumsq_honest"] = s.sumsq_honest;
  j["n_strategic_clear"] = s.n_strategic_clear;
  j["sum_strategic_clear"] = s.sum_strategic_clear;
  j["sumsq_strategic_clear"] = s.sumsq_strategic_clear;
  return j;
}

}  // namespace

nlohmann::json simulate_report_json(const SimConfig& cfg, const SimStats& stats,
                                    const VerificationReport& report,
                                    const OutputMeta& meta) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["provenance"] = provenance_json(meta);
  nlohmann::json config = params_json(cfg.params);
  config["cohort_size"] = cfg.cohort_size;
  config["periods"] = cfg.periods;
  config["burn_in"] = cfg.burn_in;
  config["seed"] = cfg.seed;
  config["marginal_band"] = cfg.marginal_band;
  if (const double* c = std::get_if<double>(&cfg.strategy)) {
    config["strategy"] = {{"cutoff", *c}};
  } else {
    config["strategy"] = {{"policy", policy_to_string(std::get<SelectionPolicy>(cfg.strategy))}};
  }
  j["config"] = config;

  nlohmann::json st;
  st["resolved_cutoff"] = stats.resolved_cutoff;
  st["matches_total"] = stats.matches_total;
  st["young_coop_rate"] = stats.young_coop_rate;
  st["young_coop_rate_given_clear"] = stats.young_coop_rate_given_clear;
  st["old_coop_rate"] = stats.old_coop_rate;
  st["stigma_prevalence_old"] = stats.stigma_prevalence_old;
  st["stigma_acquisition_rate"] = stats.stigma_acquisition_rate;
  st["n_young_matches"] = stats.n_young_matches;
  st["n_young_clear_matches"] = stats.n_young_clear_matches;
  st["n_old_obs"] = stats.n_old_obs;
  st["mean_payoff_honest_young"] = stats.mean_payoff_honest_young;
  st["mean_payoff_strategic_young"] = stats.mean_payoff_strategic_young;
  st["mean_payoff_honest_old"] = stats.mean_payoff_honest_old;
  st["mean_payoff_strategic_old"] = stats.mean_payoff_strategic_old;
  st["n_honest_young"] = stats.n_honest_young;
  st["n_strategic_young"] = stats.n_strategic_young;
  st["n_honest_old"] = stats.n_honest_old;
  st["n_strategic_old"] = stats.n_strategic_old;
  st["below"] = stratum_json(stats.below);
  st["above"] = stratum_json(stats.above);
  nlohmann::json series = nlohmann::json::array();
  for (const PeriodStats& ps : stats.period_series) {
    nlohmann::json p;
    p["period"] = ps.period;
    p["matches"] = ps.matches;
    p["young_coop_rate"] = ps.young_coop_rate;
    p["young_coop_rate_given_clear"] = ps.young_coop_rate_given_clear;
    p["old_coop_rate"] = ps.old_coop_rate;
    p["stigma_prevalence_old"] = ps.stigma_prevalence_old;
    p["stigma_acquired"] = ps.stigma_acquired;
    series.push_back(p);
  }
  st["period_series"] = series;
  j["stats"] = st;

  nlohmann::json ver;
  ver["passed"] = report.passed;
  ver["z_threshold"] = report.z_threshold;
  nlohmann::json lines = nlohmann::json::array();
  for (const TheoryLine& line : report.lines) {
    nlohmann::json l;
    l["name"] = line.name;
    l["theory"] = line.theory;
    l["empirical"] = line.empirical;
    l["se"] = line.se;
    l["z"] = line.z;
    l["n"] = line.n;
    l["status"] = status_to_string(line.status);
    lines.push_back(l);
  }
  ver["lines"] = lines;
  j["verification"] = ver;
  return j;
}

std::string to_pretty_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace stigma
