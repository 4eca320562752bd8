#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mixnoise/errors.hpp"
#include "mixnoise/observables.hpp"

using namespace mixnoise;
using c = std::complex<double>;

TEST(ReducedRho, BellSample) {
  const double s = 1.0 / std::sqrt(2.0);
  const auto rho = reduced_density_matrix({{c(s), c(s)}});
  EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(rho(2, 2).real(), 0.5, 1e-15);
  EXPECT_NEAR(rho(1, 2).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(rho(3, 3)), 0.0, 1e-15);
  EXPECT_NEAR(concurrence_wootters(rho), 1.0, 1e-12);
  EXPECT_NEAR(concurrence_xstate(rho), 1.0, 1e-12);
}

TEST(ReducedRho, GroundSample) {
  const auto rho = reduced_density_matrix({{c(0), c(0)}});
  EXPECT_EQ(rho(3, 3), c(1));
  EXPECT_NEAR(concurrence_wootters(rho), 0.0, 1e-12);
}

TEST(ReducedRho, ClassicalMixture) {
  const auto rho = reduced_density_matrix({{c(1), c(0)}, {c(0), c(1)}});
  EXPECT_DOUBLE_EQ(rho(1, 1).real(), 0.5);
  EXPECT_DOUBLE_EQ(rho(2, 2).real(), 0.5);
  EXPECT_EQ(rho(1, 2), c(0));
  EXPECT_NEAR(concurrence_wootters(rho), 0.0, 1e-12);
}

TEST(ReducedRho, EmptyAndOversized) {
  EXPECT_THROW(reduced_density_matrix({}), ParameterError);
  EXPECT_THROW(reduced_density_matrix({{c(1), c(1)}}), ParameterError);
}

TEST(Xstate, WorkedExample) {
  const auto rho = density_from_moments(0.3, 0.3, c(0.2));
  EXPECT_NEAR(rho(3, 3).real(), 0.4, 1e-15);
  EXPECT_NEAR(concurrence_xstate(rho), 0.4, 1e-12);
  EXPECT_NEAR(concurrence_wootters(rho), 0.4, 1e-12);
  EXPECT_EQ(concurrence_xstate(density_from_moments(0.3, 0.3, c(0))), 0.0);
}

TEST(Xstate, StructureViolation) {
  DensityMatrix rho = density_from_moments(0.3, 0.3, c(0.2));
  rho(0, 3) = rho(3, 0) = 0.1;
  EXPECT_THROW(concurrence_xstate(rho), ValidationError);
}

TEST(Validation, RejectsBrokenMatrices) {
  DensityMatrix rho = density_from_moments(0.5, 0.5, c(0.5));
  DensityMatrix bad = rho;
  bad(1, 2) += c(0, 1e-6);
  EXPECT_THROW(validate_density(bad), ValidationError);
  bad = rho;
  bad(3, 3) = 0.1;
  EXPECT_THROW(validate_density(bad), ValidationError);
  bad = density_from_moments(0.5, 0.5, c(0.6));
  EXPECT_THROW(concurrence_wootters(bad), ValidationError);
}

TEST(Wootters, AgreesWithXstateOnRandomStates) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = u(gen) * (1.0 - a);
    const c r = std::polar(u(gen) * std::sqrt(a * b), 6.283185307179586 * u(gen));
    const auto rho = density_from_moments(a, b, r);
    ASSERT_NEAR(concurrence_wootters(rho), concurrence_xstate(rho), 1e-12);
  }
}

TEST(Wootters, ConvexityOnAverages) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::pair<c, c>> samples;
  double mean_pure = 0.0;
  for (int i = 0; i < 200; ++i) {
    c a(n(gen), n(gen)), b(n(gen), n(gen)), d(n(gen), n(gen));
    const double s = std::sqrt(std::norm(a) + std::norm(b) + std::norm(d));
    samples.emplace_back(a / s, b / s);
    mean_pure += pure_concurrence(a / s, b / s) / 200;
  }
  EXPECT_LE(concurrence_wootters(reduced_density_matrix(samples)), mean_pure + 1e-9);
}
