#include <gtest/gtest.h>

#include <cmath>

#include "mixnoise/ensemble.hpp"
#include "mixnoise/errors.hpp"

using namespace mixnoise;

namespace {

EnsemblePoint small_point() {
  EnsemblePoint pt;
  pt.noise = MixtureNoise{OuNoise{15, 2}, FlickerNoise{1.0, 2.0, 2.0}, 0.5};
  pt.n_traj = 100;
  pt.grid = TimeGrid::span(0.0, 4.0, 1e-3);
  return pt;
}

}  // namespace

TEST(Ensemble, DeterministicSingleTrajectory) {
  EnsemblePoint pt;
  pt.params.noise_scale = 0.0;
  pt.n_traj = 1;
  pt.grid = TimeGrid::span(0.0, 10.0, 1e-3);
  const auto r = run_ensemble(pt);
  ASSERT_EQ(r.times().size(), 101u);
  for (std::size_t i = 0; i < r.times().size(); ++i) {
    const auto s = analytic_constant_G(pt.params, r.times()[i], AmplitudeState::bell());
    EXPECT_NEAR(r.concurrence.values[i], 2.0 * std::abs(s.C1 * std::conj(s.C2)), 1e-9);
    EXPECT_EQ(r.concurrence.std_error[i], 0.0);
  }
}

TEST(Ensemble, DecoupledAtomsKeepFullConcurrence) {
  EnsemblePoint pt = small_point();
  pt.params.G0 = {0.0, 0.0};
  for (double c : run_ensemble(pt).concurrence.values) EXPECT_NEAR(c, 1.0, 1e-12);
}

TEST(Ensemble, ParallelEqualsSerialBitwise) {
  const EnsemblePoint pt = small_point();
  const auto s = run_ensemble_serial(pt);
  for (int w : {1, 3, 8}) {
    const auto p = run_ensemble(pt, w);
    EXPECT_EQ(p.concurrence.values, s.concurrence.values);
    EXPECT_EQ(p.concurrence.std_error, s.concurrence.std_error);
    EXPECT_EQ(p.mean_norm, s.mean_norm);
    EXPECT_EQ(p.config_digest, s.config_digest);
  }
}

TEST(Ensemble, ConvexityAndNormBound) {
  const auto r = run_ensemble(small_point());
  for (std::size_t i = 0; i < r.times().size(); ++i) {
    EXPECT_LE(r.concurrence.values[i], r.mean_pure_concurrence[i] + 1e-9);
    EXPECT_LE(r.mean_norm[i], 1.0 + 1e-6);
    EXPECT_GE(r.concurrence.values[i], 0.0);
  }
}

TEST(Ensemble, DoublingTrajectoriesAgrees) {
  EnsemblePoint pt;
  pt.noise = OuNoise{15, 2};
  pt.grid = TimeGrid::span(0.0, 10.0, 1e-3);
  pt.n_traj = 500;
  const auto a = run_ensemble(pt);
  pt.n_traj = 1000;
  pt.master_seed += 1;
  const auto b = run_ensemble(pt);
  for (std::size_t i = 0; i < a.times().size(); ++i) {
    const double pooled = std::hypot(a.concurrence.std_error[i], b.concurrence.std_error[i]);
    EXPECT_LT(std::abs(a.concurrence.values[i] - b.concurrence.values[i]), 3.0 * pooled + 1e-12)
        << "t=" << a.times()[i];
  }
}

TEST(Ensemble, DigestTracksConfig) {
  EnsemblePoint a = small_point(), b = small_point();
  EXPECT_EQ(run_ensemble(a).config_digest.size(), 64u);
  b.master_seed += 1;
  EXPECT_NE(canonical_text(a), canonical_text(b));
  EXPECT_EQ(canonical_text(a), canonical_text(small_point()));
}

TEST(Ensemble, LookupAtRecordedTimes) {
  const auto r = run_ensemble(small_point());
  EXPECT_NO_THROW(r.at(2.0));
  EXPECT_THROW(r.at(2.05), ParameterError);
}

TEST(Ensemble, DivergenceCarriesTrajectory) {
  EnsemblePoint pt = small_point();
  pt.params.G0 = {1e300, 1e300};
  try {
    run_ensemble(pt, 2);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.trajectory().value_or(99), 0u);
    EXPECT_EQ(e.seed().value_or(0), pt.master_seed);
  }
}

TEST(Convergence, IdenticalPasses) {
  const auto r = run_ensemble(small_point());
  const auto rep = convergence_check(r, r, 0.0);
  EXPECT_EQ(rep.max_abs_diff, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(Convergence, StatisticalDifferenceFailsAtZeroTolerance) {
  EnsemblePoint pt = small_point();
  const auto a = run_ensemble(pt);
  pt.master_seed += 1;
  EXPECT_FALSE(convergence_check(a, run_ensemble(pt), 0.0).pass);
}

TEST(Convergence, HalvedStepOnConstantCoupling) {
  EnsemblePoint pt;
  pt.params.noise_scale = 0.0;
  pt.n_traj = 1;
  pt.grid = TimeGrid::span(0.0, 20.0, 1e-3);
  EnsemblePoint half = pt;
  half.grid = TimeGrid::span(0.0, 20.0, 5e-4);
  half.stride = 2 * pt.stride;
  EXPECT_LT(convergence_check(run_ensemble(pt), run_ensemble(half), 1e-6).max_abs_diff, 1e-6);
  EnsemblePoint other = pt;
  other.grid = TimeGrid::span(0.0, 10.0, 1e-3);
  EXPECT_THROW(convergence_check(run_ensemble(pt), run_ensemble(other), 1.0), ParameterError);
}
