#include <gtest/gtest.h>

#include <numbers>

#include "mixnoise/config.hpp"
#include "mixnoise/errors.hpp"

using namespace mixnoise;

TEST(Config, DefaultsFillIn) {
  const Config cfg = parse_config_text("");
  const EnsemblePoint pt = build_point(cfg);
  EXPECT_EQ(kind_of(cfg), ExperimentKind::single);
  EXPECT_EQ(pt.n_traj, 1000u);
  EXPECT_EQ(pt.grid.n_steps, 20001u);
  EXPECT_EQ(pt.stride, 100u);
  EXPECT_DOUBLE_EQ(pt.params.x0[0], std::numbers::pi / 2);
  ASSERT_TRUE(std::holds_alternative<OuNoise>(pt.noise));
  EXPECT_DOUBLE_EQ(std::get<OuNoise>(pt.noise).gamma_xi, 15.0);
}

TEST(Config, ParsesSectionsAndLists) {
  const Config cfg = parse_config_text(R"(
[experiment]
kind = pmin_scan
values = 10, 20
p_values = 0:0.25:1
[system]
G0 = 0.1
kappa_x0 = pi
[noise_a]
type = ou
Gamma_xi = 0.2
[noise_b]
type = flicker
eta = 2
variance = 2
)");
  const ExperimentSpec s = build_experiment(cfg);
  EXPECT_EQ(s.kind, ExperimentKind::pmin_scan);
  EXPECT_EQ(s.axis, "noise_a.gamma_xi");
  EXPECT_EQ(s.axis_values, (std::vector<double>{10, 20}));
  EXPECT_EQ(s.p_values, (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_DOUBLE_EQ(s.base.params.G0[1], 0.1);
  EXPECT_DOUBLE_EQ(s.base.params.x0[0], std::numbers::pi);
  const auto& m = std::get<MixtureNoise>(s.base.noise);
  EXPECT_DOUBLE_EQ(std::get<OuNoise>(m.a).Gamma_xi, 0.2);
  EXPECT_EQ(std::get<FlickerNoise>(m.b).target_variance, 2.0);
  EXPECT_EQ(s.label_a, "ou");
  EXPECT_EQ(s.label_b, "violet");
}

TEST(Config, OverridesRewriteKeys) {
  Config cfg = parse_config_text("[grid]\ndt = 0.001\n");
  apply_override(cfg, "grid.dt = 0.01");
  apply_override(cfg, "ensemble.seed=5");
  const EnsemblePoint pt = build_point(cfg);
  EXPECT_DOUBLE_EQ(pt.grid.dt, 0.01);
  EXPECT_EQ(pt.stride, 10u);
  EXPECT_EQ(pt.master_seed, 5u);
  EXPECT_THROW(apply_override(cfg, "novalue"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "nosection=1"), ConfigError);
}

TEST(Config, BadValuesAreConfigErrors) {
  EXPECT_THROW(build_point(parse_config_text("[grid]\ndt = fast\n")), ConfigError);
  EXPECT_THROW(build_point(parse_config_text("[system]\ngamma_Q = -1\n")), ConfigError);
  EXPECT_THROW(build_point(parse_config_text("[noise]\ntype = brown\n")), ConfigError);
  EXPECT_THROW(build_point(parse_config_text("[ensemble]\nn_traj = 0\n")), ConfigError);
  EXPECT_THROW(build_experiment(parse_config_text("[experiment]\nkind = gamma_xi_sweep\nt_eval = 90\n")),
               ConfigError);
  EXPECT_THROW(build_experiment(parse_config_text("[experiment]\nkind = dance\n")), ConfigError);
  EXPECT_THROW(parse_config_text("[broken\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST(Config, DigestIsStableAndIgnoresWorkers) {
  const Config a = parse_config_text("[ensemble]\nseed = 3\n");
  const Config b = parse_config_text("[ensemble]\nseed = 3\nworkers = 4\n");
  const Config c = parse_config_text("[ensemble]\nseed = 4\n");
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_NE(config_digest(a), config_digest(c));
  EXPECT_EQ(config_digest(a).size(), 64u);
  // Formatting of equal values does not matter.
  EXPECT_EQ(config_digest(parse_config_text("[system]\nG0 = 0.10\n")),
            config_digest(parse_config_text("[system]\nG0=0.1\n")));
}

TEST(Config, SweepKindsDefaultToMixtures) {
  const ExperimentSpec s = build_experiment(parse_config_text("[experiment]\nkind = gamma_q_sweep\n"));
  EXPECT_EQ(s.axis, "system.gamma_Q");
  EXPECT_EQ(s.axis_values, (std::vector<double>{0.02, 0.1, 1}));
  EXPECT_DOUBLE_EQ(s.base.grid.t_end(), 50.0);
  const auto& m = std::get<MixtureNoise>(s.base.noise);
  EXPECT_TRUE(std::holds_alternative<TelegraphNoise>(m.a));
  EXPECT_EQ(s.label_a, "telegraph");
  EXPECT_EQ(s.label_b, "ou");
}

TEST(Config, ShippedPresetsLoad) {
  for (const char* name : {"fig2", "fig3_psd", "fig4", "fig5_psd", "fig6", "single"})
    EXPECT_NO_THROW(build_experiment(load_config(preset_dir() + "/" + name + ".ini"))) << name;
}
