#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mixnoise/experiments.hpp"
#include "mixnoise/io.hpp"

using namespace mixnoise;
namespace fs = std::filesystem;

namespace {

Config quick(const std::string& text) {
  Config cfg = parse_config_text(text);
  apply_override(cfg, "ensemble.n_traj=40");
  apply_override(cfg, "grid.t_end=2");
  apply_override(cfg, "grid.dt=0.002");
  apply_override(cfg, "experiment.t_eval=2");
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("mixnoise_test_" + name);
  fs::remove_all(d);
  return d;
}

Cell cell(const std::string& label, double c, double se) {
  Cell x;
  x.label = label;
  x.c_eval = c;
  x.se_eval = se;
  return x;
}

}  // namespace

TEST(Labels, WeightLabels) {
  ExperimentSpec s;
  s.label_a = "violet";
  s.label_b = "ou";
  EXPECT_EQ(weight_label(s, 1.0), "violet");
  EXPECT_EQ(weight_label(s, 0.0), "ou");
  EXPECT_EQ(weight_label(s, 0.5), "mixed");
  EXPECT_EQ(weight_label(s, 0.25), "p=0.25");
}

TEST(Ordering, ResolvedOnlyBeyondThreeSigma) {
  const Cell a = cell("a", 0.9, 0.01), b = cell("b", 0.8, 0.01), c = cell("c", 0.79, 0.01);
  const Ordering o = order_cells(1.0, {&c, &a, &b});
  EXPECT_EQ(o.labels, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_FALSE(o.resolved);
  EXPECT_TRUE(order_cells(1.0, {&a, &b}).resolved);
}

TEST(Sweep, NoClassicalNoiseCollapsesSurfaces) {
  Config cfg = quick("[experiment]\nkind = gamma_xi_sweep\nvalues = 1, 90\n[noise_a]\nvariance = 2\n");
  apply_override(cfg, "system.noise_scale=0");
  const SweepResult r = run_fig2_style(cfg, 2);
  ASSERT_EQ(r.cells.size(), 6u);
  for (const Cell& c : r.cells) EXPECT_EQ(c.result.concurrence.values, r.cells[0].result.concurrence.values);
}

TEST(Sweep, GammaQSweepAddsBaseline) {
  const SweepResult r = run_fig4_style(quick("[experiment]\nkind = gamma_q_sweep\nvalues = 1\n"), 2);
  ASSERT_EQ(r.cells.size(), 4u);
  EXPECT_EQ(r.cells.back().label, "none");
  EXPECT_TRUE(std::isnan(r.cells.back().p));
  ASSERT_EQ(r.orderings.size(), 1u);
  EXPECT_EQ(r.orderings[0].labels.size(), 3u);
  EXPECT_EQ(r.orderings[0].hf_labels.size(), 3u);
}

TEST(Pmin, SingletonGrid) {
  const SweepResult r = run_pmin_scan(quick("[experiment]\nkind = pmin_scan\nvalues = 10\np_values = 0.5\n"), 2);
  ASSERT_EQ(r.pmin.size(), 1u);
  EXPECT_EQ(r.pmin[0].p_min, 0.5);
  EXPECT_FALSE(r.pmin[0].flat);
}

TEST(Pmin, IdenticalModelsAreFlat) {
  const SweepResult r = run_pmin_scan(quick(R"(
[experiment]
kind = pmin_scan
values = 15
p_values = 0:0.25:1
[noise]
shared = true
[noise_a]
type = ou
[noise_b]
type = ou
)"),
                                      2);
  const auto& pm = r.pmin.at(0);
  EXPECT_TRUE(pm.flat);
  EXPECT_EQ(pm.near_min.size(), 5u);
  EXPECT_FALSE(r.warnings.empty());
  for (const Cell& c : r.cells) EXPECT_NEAR(c.c_eval, r.cells[0].c_eval, 3.0 * std::hypot(c.se_eval, r.cells[0].se_eval));
}

TEST(Psd, HighRateOuRanksAboveViolet) {
  Config cfg = load_config(preset_dir() + "/fig3_psd.ini");
  apply_override(cfg, "experiment.psd_samples=65536");
  apply_override(cfg, "experiment.psd_segments=8");
  const PsdReport r = run_psd_report(cfg);
  EXPECT_EQ(r.ranking_power, (std::vector<std::string>{"ou", "mixed", "violet"}));
  EXPECT_EQ(r.analytic.size(), 4u);
  EXPECT_EQ(r.estimated.size(), 3u);
  for (const auto& m : r.models) EXPECT_NEAR(m.estimated.hf_fraction, m.analytic.hf_fraction, 0.1) << m.label;
}

TEST(Psd, TelegraphRanksFirstAtUnitQuantumRate) {
  Config cfg = load_config(preset_dir() + "/fig5_psd.ini");
  apply_override(cfg, "experiment.psd_samples=65536");
  apply_override(cfg, "experiment.psd_segments=8");
  EXPECT_EQ(run_psd_report(cfg).ranking_power, (std::vector<std::string>{"telegraph", "ou", "mixed"}));
}

TEST(Output, FilesCarryProvenanceAndRepeatExactly) {
  const Config cfg = quick("[experiment]\nkind = gamma_q_sweep\nvalues = 0.1, 1\n");
  const fs::path a = scratch("a"), b = scratch("b");
  run_and_write(cfg, a.string(), 1);
  run_and_write(cfg, b.string(), 3);
  const std::string digest = config_digest(cfg);
  std::size_t csv = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    const std::string text = slurp(e.path());
    EXPECT_NE(text.find(digest), std::string::npos) << rel;
    EXPECT_EQ(text, slurp(b / rel)) << rel;
    if (rel.extension() == ".csv") ++csv;
  }
  EXPECT_GT(csv, 10u);
  const auto j = nlohmann::json::parse(slurp(a / "result.json"));
  for (const char* key : {"experiment", "config_digest", "seed", "n_traj", "grid", "checkpoints", "orderings", "warnings"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["orderings"].size(), 2u);
}

TEST(Output, SingleRunAndPsdFiles) {
  const fs::path d = scratch("single"), p = scratch("psd");
  run_and_write(quick("[noise]\ntype = telegraph\n"), d.string(), 1);
  for (const char* f : {"concurrence.csv", "rho.csv", "norm.csv", "result.json", "plot.gp"})
    EXPECT_TRUE(fs::exists(d / f)) << f;
  Config cfg = load_config(preset_dir() + "/fig5_psd.ini");
  apply_override(cfg, "experiment.psd_samples=16384");
  apply_override(cfg, "experiment.psd_segments=4");
  run_and_write(cfg, p.string(), 1);
  for (const char* f : {"psd_analytic.csv", "psd_estimate.csv", "hf.csv", "result.json", "plot.gp"})
    EXPECT_TRUE(fs::exists(p / f)) << f;
}
