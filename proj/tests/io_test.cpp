#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "stigma/equilibrium.hpp"
#include "stigma/io.hpp"
#include "stigma/model.hpp"
#include "stigma/simulator.hpp"
#include "stigma/statics.hpp"

using namespace stigma;

TEST_CASE("double formatting round-trips exactly and stays short") {
  const double values[] = {0.0,  1.0,    1.0 / 3.0, 0.1, 1e-17,
                           1.05, 6.02e23, -2.5,     1.0 / 6.0};
  for (double v : values) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.05) == "1.05");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("enum names are stable") {
  CHECK(regime_to_string(Regime::UniqueInterior) == "unique_interior");
  CHECK(regime_to_string(Regime::TripleEquilibrium) == "triple_equilibrium");
  CHECK(regime_from_string("dominant_cooperation") == Regime::DominantCooperation);
  CHECK_THROWS_AS(regime_from_string("mystery"), std::invalid_argument);
  CHECK(kind_to_string(EquilibriumKind::CornerHigh) == "corner_high");
  CHECK(status_to_string(LineStatus::InsufficientSamples) == "insufficient_samples");
  CHECK(policy_to_string(SelectionPolicy::InteriorIfExists) == "interior");
}

TEST_CASE("sweep CSV preamble carries schema, build, and command") {
  const std::vector<double> grid{0.2, 0.55, 1.0};
  const std::vector<SweepRow> rows = sweep(3.0, 0.0, grid);
  OutputMeta meta{"sweep --b 3", false};
  const std::string csv = sweep_to_csv(rows, meta);

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema_version 1");
  std::getline(in, line);
  CHECK(line == std::string("# build ") + kBuildTag);
  std::getline(in, line);
  CHECK(line == "# command sweep --b 3");
  std::getline(in, line);
  CHECK(line == kSweepCsvHeader);
  CHECK(csv.find("# generated ") == std::string::npos);

  OutputMeta stamped{"sweep --b 3", true};
  CHECK(sweep_to_csv(rows, stamped).find("# generated ") != std::string::npos);
}

TEST_CASE("sweep CSV round-trips every field") {
  const std::vector<double> grid{0.2, 0.55, 1.0};
  const std::vector<SweepRow> rows = sweep(3.0, 0.0, grid);
  const std::string csv = sweep_to_csv(rows, OutputMeta{"sweep --b 3", false});
  const std::vector<SweepRow> parsed = parse_sweep_csv(csv);
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].pi == rows[i].pi);
    CHECK(parsed[i].b == rows[i].b);
    CHECK(parsed[i].alpha == rows[i].alpha);
    CHECK(parsed[i].eq_low == rows[i].eq_low);
    CHECK(parsed[i].eq_interior == rows[i].eq_interior);
    CHECK(parsed[i].eq_high == rows[i].eq_high);
    CHECK(parsed[i].continuum == rows[i].continuum);
    CHECK(parsed[i].regime == rows[i].regime);
    CHECK(parsed[i].coop_min == rows[i].coop_min);
    CHECK(parsed[i].coop_max == rows[i].coop_max);
  }
  // the pi = 1 row is a marker row: no equilibrium payload
  CHECK(parsed[2].error == "vacuous");
  CHECK(!parsed[2].eq_low.has_value());
  CHECK(!parsed[2].coop_min.has_value());
  // the pi = 0.55 row sits in the overlap band
  CHECK(parsed[1].regime == Regime::TripleEquilibrium);
  CHECK(parsed[1].eq_low.has_value());
  CHECK(parsed[1].eq_interior.has_value());
  CHECK(parsed[1].eq_high.has_value());
}

TEST_CASE("sweep CSV parser rejects malformed input") {
  CHECK_THROWS_AS(parse_sweep_csv("pi,b\n0.2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sweep_csv(""), std::invalid_argument);
  const std::string header = std::string(kSweepCsvHeader) + "\n";
  CHECK_THROWS_AS(parse_sweep_csv(header + "0.2,3,0\n"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_sweep_csv(header + "0.2,3,0,0,,,2,all_defect,0.2,0.2\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_sweep_csv(header + "0.2,3,0,0,,,0,no_such_regime,0.2,0.2\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_sweep_csv(header + "oops,3,0,0,,,0,all_defect,0.2,0.2\n"),
      std::invalid_argument);
}

TEST_CASE("solve report captures the equilibrium set") {
  const ModelParams params(0.4, 1.5, 0.0);
  const EquilibriumSet set = enumerate_equilibria(params);
  const RegimeClassification cls = classify_regime(params);
  const nlohmann::json j =
      solve_report_json(params, set, cls, OutputMeta{"solve", false});
  CHECK(j.at("schema_version").get<std::string>() == "1");
  CHECK(j.at("provenance").at("build").get<std::string>() == kBuildTag);
  CHECK(j.at("provenance").at("command").get<std::string>() == "solve");
  CHECK(!j.at("provenance").contains("generated"));
  CHECK(j.at("params").at("pi").get<double>() == 0.4);
  CHECK(j.at("params").at("cost_distribution").get<std::string>() == "uniform");
  CHECK(j.at("continuum").get<bool>() == false);
  REQUIRE(j.at("equilibria").size() == 1);
  CHECK(j.at("equilibria")[0].at("kind").get<std::string>() == "interior");
  CHECK(j.at("equilibria")[0].at("cutoff").get<double>() ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(j.at("equilibria")[0].at("residual").get<double>() <= 1e-10);
  CHECK(j.at("regime").get<std::string>() == "unique_interior");
  CHECK(j.at("cooperation").at("min").get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(j.at("cooperation").at("max").get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(j.at("regime_boundaries").size() == 2);
  CHECK(j.at("regime_boundaries")[0].get<double>() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(j.at("regime_boundaries")[1].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));

  const std::string csv =
      solve_report_csv(params, set, cls, OutputMeta{"solve", false});
  const std::vector<SweepRow> parsed = parse_sweep_csv(csv);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].regime == Regime::UniqueInterior);
  REQUIRE(parsed[0].eq_interior.has_value());
  CHECK(*parsed[0].eq_interior == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("simulate report echoes the full configuration") {
  SimConfig cfg{ModelParams(0.4, 1.5, 0.0)};
  cfg.cohort_size = 300;
  cfg.periods = 5;
  cfg.burn_in = 1;
  cfg.seed = 2;
  cfg.strategy = 1.0 / 6.0;
  const SimStats stats = run_simulation(cfg);
  const VerificationReport report = compare_to_theory(stats, cfg);
  const nlohmann::json j =
      simulate_report_json(cfg, stats, report, OutputMeta{"simulate", false});
  CHECK(j.at("config").at("cohort_size").get<std::uint32_t>() == 300);
  CHECK(j.at("config").at("seed").get<std::uint64_t>() == 2);
  CHECK(j.at("config").at("strategy").at("cutoff").get<double>() ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(j.at("stats").at("period_series").size() == 5);
  CHECK(j.at("verification").at("lines").size() == report.lines.size());
  CHECK(j.at("verification").at("z_threshold").get<double>() == 4.0);
  CHECK(j.at("verification").at("passed").get<bool>() == report.passed);

  SimConfig policy_cfg = cfg;
  policy_cfg.strategy = SelectionPolicy::MaxEquilibrium;
  const nlohmann::json pj = simulate_report_json(policy_cfg, stats, report,
                                                 OutputMeta{"simulate", false});
  CHECK(pj.at("config").at("strategy").at("policy").get<std::string>() == "max");
}

TEST_CASE("pretty JSON ends with a newline and sorts keys") {
  nlohmann::json j;
  j["zeta"] = 1;
  j["alpha"] = 2;
  const std::string s = to_pretty_json(j);
  CHECK(s.back() == '\n');
  CHECK(s.find("alpha") < s.find("zeta"));
}

TEST_CASE("text files are written verbatim or refused loudly") {
  const std::string path = "io_test_scratch.txt";
  write_text_file(path, "hello\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "hello\n");
  in.close();
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_text_file("/nonexistent_dir_zz/out.txt", "x"),
                  std::runtime_error);
}
