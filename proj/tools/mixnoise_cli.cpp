#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mixnoise/acceptance.hpp"
#include "mixnoise/config.hpp"
#include "mixnoise/errors.hpp"
#include "mixnoise/io.hpp"

namespace {

using namespace mixnoise;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string out;
  std::vector<std::string> overrides;
  bool quick = false;
};

Config effective_config(const Globals& g, ExperimentKind kind) {
  Config cfg = g.config.empty() ? Config{} : load_config(g.config);
  set_value(cfg, "experiment.kind", to_string(kind));
  if (g.seed) set_value(cfg, "ensemble.seed", std::to_string(*g.seed));
  for (const auto& o : g.overrides) apply_override(cfg, o);
  return cfg;
}

int run_experiment(const Globals& g, ExperimentKind kind) {
  const Config cfg = effective_config(g, kind);
  const std::string dir = g.out.empty() ? "out/" + to_string(kind) : g.out;
  run_and_write(cfg, dir, g.workers);
  std::printf("wrote %s (config_digest %s)\n", dir.c_str(), config_digest(cfg).c_str());
  return 0;
}

int run_validate(const Globals& g) {
  const Config cfg = effective_config(g, ExperimentKind::validate);
  const EnsemblePoint point = build_point(cfg);
  const std::string dir = g.out.empty() ? "out/validate" : g.out;

  AcceptanceOptions opts;
  opts.workers = g.workers;
  opts.quick = g.quick;
  opts.scratch_dir = dir + "/scratch";
  std::vector<CriterionResult> results;
  auto report = [](const CriterionResult& r) {
    std::printf("%s %s: %s (%.2f s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
  };
  results.push_back(check_dt_convergence(point));
  report(results.back());
  for (auto& r : run_acceptance(opts, report)) results.push_back(std::move(r));

  nlohmann::json j;
  j["experiment"] = "validate";
  j["config_digest"] = config_digest(cfg);
  j["seed"] = point.master_seed;
  j["quick"] = g.quick;
  j["criteria"] = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    j["criteria"].push_back({{"name", r.name},
                             {"passed", r.passed},
                             {"detail", r.detail},
                             {"seconds", r.seconds},
                             {"budget_seconds", r.budget_seconds}});
  }
  j["passed"] = all;
  std::filesystem::create_directories(dir);
  std::ofstream(dir + "/validate.json") << j.dump(2) << "\n";
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo entanglement protection under mixed classical noise"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&g](CLI::App* sub) {
    sub->add_option("--config", g.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", g.seed, "Master seed");
    sub->add_option("--workers", g.workers, "Worker threads (0 = all)");
    sub->add_option("--out", g.out, "Output directory");
    sub->add_option("--set", g.overrides, "Override section.key=value (repeatable)");
  };

  const std::vector<std::pair<std::string, ExperimentKind>> runs{
      {"simulate", ExperimentKind::single},        {"sweep-gxi", ExperimentKind::gamma_xi_sweep},
      {"sweep-gq", ExperimentKind::gamma_q_sweep}, {"pmin", ExperimentKind::pmin_scan},
      {"psd", ExperimentKind::psd_report}};
  const std::vector<std::string> help{"Single ensemble run", "Noise-rate sweep of pure and mixed noises",
                                      "Quantum-noise rate sweep", "Mixing-ratio scan for the minimum",
                                      "Spectral report with HF rankings"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    subs.push_back(app.add_subcommand(runs[i].first, help[i]));
    add_globals(subs.back());
  }
  CLI::App* validate = app.add_subcommand("validate", "Run the acceptance suite and write validate.json");
  add_globals(validate);
  validate->add_flag("--quick", g.quick, "Skip the ensemble-heavy criteria");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(g);
    for (std::size_t i = 0; i < runs.size(); ++i)
      if (subs[i]->parsed()) return run_experiment(g, runs[i].second);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
