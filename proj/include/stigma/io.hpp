#ifndef STIGMA_IO_HPP
#define STIGMA_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "stigma/equilibrium.hpp"
#include "stigma/simulator.hpp"
#include "stigma/statics.hpp"

namespace stigma {

inline constexpr const char* kBuildTag = "stigma-olg 0.1.0";
inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kSweepCsvHeader =
    "pi,b,alpha,eq_low,eq_interior,eq_high,continuum,regime,coop_min,coop_max";

/** Shortest decimal string that parses back to exactly the same double. */
std::string format_double(double x);

std::string kind_to_string(EquilibriumKind kind);
std::string regime_to_string(Regime regime);
Regime regime_from_string(const std::string& name);  // throws on unknown names
std::string status_to_string(LineStatus status);
std::string policy_to_string(SelectionPolicy policy);

struct OutputMeta {
  std::string command;            // invocation echoed into the output
  bool include_timestamp = true;  // off for byte-stable replays
};

/** Commented preamble plus the fixed header plus one line per row. */
std::string sweep_to_csv(const std::vector<SweepRow>& rows, const OutputMeta& meta);

/** Inverse of sweep_to_csv, for round-trip checks; comments are skipped. */
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

nlohmann::json solve_report_json(const ModelParams& params, const EquilibriumSet& set,
                                 const RegimeClassification& classification,
                                 const OutputMeta& meta);

/** Single-point CSV with the sweep schema. */
std::string solve_report_csv(const ModelParams& params, const EquilibriumSet& set,
                             const RegimeClassification& classification,
                             const OutputMeta& meta);

nlohmann::json simulate_report_json(const SimConfig& cfg, const SimStats& stats,
                                    const VerificationReport& report,
                                    const OutputMeta& meta);

/** Serialize with sorted keys and trailing newline. */
std::string to_pretty_json(const nlohmann::json& j);

/** Write text to path; throws std::runtime_error when the path is unwritable. */
void write_text_file(const std::string& path, const std::string& content);

}  // namespace stigma

#endif  // STIGMA_IO_HPP
