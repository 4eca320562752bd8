#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mixnoise/config.hpp"

namespace mixnoise {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  std::string preset_dir = mixnoise::preset_dir();
  std::string scratch_dir = "acceptance_scratch";
  int workers = 0;
  bool quick = false;  // skip the ensemble-heavy criteria
  std::vector<std::string> only;  // empty: all
};

CriterionResult check_oracle_equivalence();
CriterionResult check_conservation();
CriterionResult check_noise_statistics();
CriterionResult check_concurrence_formulas();
CriterionResult check_freezing(int workers);
CriterionResult check_fig2_orderings(const std::string& preset_dir, int workers);
CriterionResult check_fig4_orderings(const std::string& preset_dir, int workers);
CriterionResult check_fig6_trend(const std::string& preset_dir, int workers);
CriterionResult check_determinism(const std::string& preset_dir, const std::string& scratch_dir);
// dt versus dt/2 on the constant-coupling version of a point.
CriterionResult check_dt_convergence(const EnsemblePoint& point);

struct NamedCriterion {
  std::string name;
  bool heavy;
  std::function<CriterionResult()> run;
};

std::vector<NamedCriterion> acceptance_criteria(const AcceptanceOptions& opts);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace mixnoise
