#ifndef STIGMA_ACCEPTANCE_HPP
#define STIGMA_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace stigma {

/** Quick trims the heavy simulation scales; tolerances stay identical. */
enum class AcceptanceMode { Quick, Full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // key realized numbers, or the failure message
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/** Runs every release criterion in order; never throws, failures are rows. */
std::vector<CriterionResult> run_acceptance(AcceptanceMode mode);

}  // namespace stigma

#endif  // STIGMA_ACCEPTANCE_HPP
