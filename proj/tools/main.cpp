#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stigma/acceptance.hpp"
#include "stigma/equilibrium.hpp"
#include "stigma/errors.hpp"
#include "stigma/io.hpp"
#include "stigma/simulator.hpp"
#include "stigma/statics.hpp"

namespace {

// 0 ok, 1 failed verification, 2 bad parameters, 3 unwritable output
constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitBadParams = 2;
constexpr int kExitUnwritable = 3;

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  try {
    stigma::write_text_file(out_path, text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnwritable;
  }
  return kExitOk;
}

stigma::SelectionPolicy policy_from_name(const std::string& name) {
  if (name == "min") return stigma::SelectionPolicy::MinEquilibrium;
  if (name == "max") return stigma::SelectionPolicy::MaxEquilibrium;
  return stigma::SelectionPolicy::InteriorIfExists;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace stigma;

  CLI::App app{"Equilibrium solver and population simulator for the stigma game"};
  app.set_config("--config", "", "read option defaults from an INI file");
  app.require_subcommand(1);

  unsigned threads = 1;
  bool no_timestamp = false;
  app.add_option("--threads", threads, "worker threads for sweeps")
      ->envname("STIGMA_OLG_THREADS")
      ->check(CLI::Range(1u, 256u));
  app.add_flag("--no-timestamp", no_timestamp,
               "omit the generated timestamp so replays are byte-identical");

  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i) command += ' ';
    command += argv[i];
  }

  double pi = 0.0, b = 0.0, alpha = 0.0;
  std::string format = "json", out_path;
  CLI::App* solve = app.add_subcommand("solve", "equilibrium set at one parameter point");
  solve->add_option("--pi", pi, "honest population share, in [0, 1)")->required();
  solve->add_option("--b", b, "one-sided defection gain, above 1")->required();
  solve->add_option("--alpha", alpha, "stigma erasure probability, in [0, 1)");
  solve->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--out", out_path, "output file (stdout when omitted)");

  double sweep_b = 0.0, sweep_alpha = 0.0, pi_min = 0.0, pi_max = 1.0;
  unsigned pi_steps = 101;
  std::string sweep_out;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "equilibria along a pi grid");
  sweep_cmd->add_option("--b", sweep_b, "one-sided defection gain, above 1")->required();
  sweep_cmd->add_option("--alpha", sweep_alpha, "stigma erasure probability, in [0, 1)");
  sweep_cmd->add_option("--pi-min", pi_min, "lowest pi grid point");
  sweep_cmd->add_option("--pi-max", pi_max, "highest pi grid point (1 marks vacuous)");
  sweep_cmd->add_option("--pi-steps", pi_steps, "number of grid points")
      ->check(CLI::Range(1u, 10000000u));
  sweep_cmd->add_option("--out", sweep_out, "output CSV file (stdout when omitted)");

  double sim_pi = 0.0, sim_b = 0.0, sim_alpha = 0.0;
  unsigned cohort = 10000, periods = 50, burn_in = 2;
  std::uint64_t seed = 1;
  double cutoff = 0.0, band = 0.005, z_threshold = 4.0;
  std::string select = "interior", sim_out;
  CLI::App* sim = app.add_subcommand("simulate", "finite-population run plus theory check");
  sim->add_option("--pi", sim_pi, "honest population share, in [0, 1]")->required();
  sim->add_option("--b", sim_b, "one-sided defection gain, above 1")->required();
  sim->add_option("--alpha", sim_alpha, "stigma erasure probability, in [0, 1)");
  sim->add_option("--cohort", cohort, "agents per group per generation")
      ->check(CLI::Range(1u, 100000000u));
  sim->add_option("--periods", periods, "periods to run")->check(CLI::Range(1u, 100000000u));
  sim->add_option("--burn-in", burn_in, "periods dropped from the aggregates");
  sim->add_option("--seed", seed, "random seed");
  CLI::Option* cutoff_opt = sim->add_option("--cutoff", cutoff, "fixed cutoff in [0, 1]");
  CLI::Option* select_opt =
      sim->add_option("--select", select, "equilibrium selection: min, max, or interior")
          ->check(CLI::IsMember({"min", "max", "interior"}));
  cutoff_opt->excludes(select_opt);
  select_opt->excludes(cutoff_opt);
  sim->add_option("--band", band, "loss half-window for the marginal payoff strata");
  sim->add_option("--z-threshold", z_threshold, "pass/fail z bound for theory lines");
  sim->add_option("--out", sim_out, "output JSON file (stdout when omitted)");

  bool quick = false, full = false;
  CLI::App* verify = app.add_subcommand("verify", "run the release acceptance criteria");
  CLI::Option* quick_opt = verify->add_flag("--quick", quick, "reduced simulation scale");
  CLI::Option* full_opt = verify->add_flag("--full", full, "full scale (default)");
  quick_opt->excludes(full_opt);
  full_opt->excludes(quick_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadParams;
  }

  const OutputMeta meta{command, !no_timestamp};
  try {
    if (solve->parsed()) {
      const ModelParams params(pi, b, alpha);
      const EquilibriumSet set = enumerate_equilibria(params);
      const RegimeClassification cls = classify_regime(params);
      const std::string text = format == "csv"
                                   ? solve_report_csv(params, set, cls, meta)
                                   : to_pretty_json(solve_report_json(params, set, cls, meta));
      return emit(text, out_path);
    }

    if (sweep_cmd->parsed()) {
      ModelParams(0.0, sweep_b, sweep_alpha);  // validate b and alpha up front
      if (pi_steps == 1 && pi_min != pi_max) {
        std::cerr << "error: a single-point grid needs pi-min equal to pi-max\n";
        return kExitBadParams;
      }
      std::vector<double> grid;
      grid.reserve(pi_steps);
      for (unsigned i = 0; i < pi_steps; ++i) {
        grid.push_back(pi_steps == 1
                           ? pi_min
                           : pi_min + (pi_max - pi_min) * i / (pi_steps - 1.0));
      }
      grid.back() = pi_max;
      const std::vector<SweepRow> rows = threads > 1
                                             ? sweep_parallel(sweep_b, sweep_alpha, grid, threads)
                                             : sweep(sweep_b, sweep_alpha, grid);
      return emit(sweep_to_csv(rows, meta), sweep_out);
    }

    if (sim->parsed()) {
      SimConfig cfg{ModelParams(sim_pi, sim_b, sim_alpha)};
      cfg.cohort_size = cohort;
      cfg.periods = periods;
      cfg.burn_in = burn_in;
      cfg.seed = seed;
      cfg.marginal_band = band;
      if (cutoff_opt->count() > 0) {
        cfg.strategy = cutoff;
      } else {
        cfg.strategy = policy_from_name(select);
      }
      cfg.validate();
      const SimStats stats = run_simulation(cfg);
      VerificationReport report;
      try {
        report = compare_to_theory(stats, cfg, z_threshold);
      } catch (const InsufficientSamplesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailed;
      }
      const int code = emit(to_pretty_json(simulate_report_json(cfg, stats, report, meta)),
                            sim_out);
      if (code != kExitOk) return code;
      if (!report.passed) {
        for (const TheoryLine& line : report.lines) {
          if (line.status == LineStatus::Fail) {
            std::cerr << "verification failed: " << line.name << " z = "
                      << format_double(line.z) << "\n";
          }
        }
        return kExitVerificationFailed;
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      const AcceptanceMode mode = quick ? AcceptanceMode::Quick : AcceptanceMode::Full;
      const std::vector<CriterionResult> results = run_acceptance(mode);
      bool all_passed = true;
      int passed = 0;
      for (const CriterionResult& r : results) {
        std::printf("[%s] %2d %-28s %6.2fs/%gs  %s\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.budget_seconds, r.detail.c_str());
        all_passed = all_passed && r.passed;
        passed += r.passed ? 1 : 0;
      }
      std::printf("%d/%zu criteria passed (%s mode)\n", passed, results.size(),
                  mode == AcceptanceMode::Full ? "full" : "quick");
      return all_passed ? kExitOk : kExitVerificationFailed;
    }
  } catch (const VacuousError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}
