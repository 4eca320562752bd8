#include <CLI11.hpp>
#include <cstdio>

#include "mixnoise/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria, one PASS/FAIL line each"};
  mixnoise::AcceptanceOptions opts;
  app.add_option("--configs", opts.preset_dir, "Preset directory");
  app.add_option("--scratch", opts.scratch_dir, "Scratch directory for the determinism runs");
  app.add_option("--workers", opts.workers, "Worker threads (0 = all)");
  app.add_option("--only", opts.only, "Run only the named criteria");
  app.add_flag("--quick", opts.quick, "Skip the ensemble-heavy criteria");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  mixnoise::run_acceptance(opts, [&failed](const mixnoise::CriterionResult& r) {
    std::printf("%s %s: %s (%.1f s, budget %.0f s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                r.seconds, r.budget_seconds);
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
