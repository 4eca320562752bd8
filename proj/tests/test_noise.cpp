#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "mixnoise/errors.hpp"
#include "mixnoise/noise.hpp"
#include "mixnoise/spectral.hpp"

using namespace mixnoise;
constexpr double kPi = std::numbers::pi;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / v.size();
}

// Trapezoid of 2*J over a log-spaced grid on [lo, hi].
double band_integral(const NoiseModel& m, double lo, double hi, const SpectralContext& ctx) {
  const int n = 200000;
  double sum = 0.0, prev_w = lo, prev_j = analytic_psd(m, lo, ctx);
  for (int i = 1; i <= n; ++i) {
    const double w = lo * std::pow(hi / lo, static_cast<double>(i) / n);
    const double j = analytic_psd(m, w, ctx);
    sum += 0.5 * (j + prev_j) * (w - prev_w);
    prev_w = w;
    prev_j = j;
  }
  return 2.0 * sum;
}

}  // namespace

TEST(Ou, ReproducibleForSameStream) {
  const TimeGrid g{0.0, 0.01, 1000};
  RngStream a(1, 3), b(1, 3);
  EXPECT_EQ(sample_ou(15, 2, g, a).values, sample_ou(15, 2, g, b).values);
}

TEST(Ou, StationaryMomentsAndCorrelation) {
  const TimeGrid g{0.0, 0.01, 1000000};
  RngStream rng(11, 0);
  const auto p = sample_ou(1.0, 2.0, g, rng);
  // Correlation time 1 over 1e4 time units: ~5000 effective samples.
  EXPECT_NEAR(mean(p.values), 0.0, 4.0 * std::sqrt(1.0 / 5000.0));
  EXPECT_NEAR(variance(p.values), 1.0, 0.1);
  const auto K = empirical_autocorr(p, 300);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k <= 300; ++k) {
    const double th = std::exp(-0.01 * k);
    num += (K[k] - th) * (K[k] - th);
    den += th * th;
  }
  EXPECT_LT(std::sqrt(num / den), 0.05);
}

TEST(Ou, RejectsNonPositiveRates) {
  const TimeGrid g{0.0, 0.01, 10};
  RngStream rng(1, 0);
  EXPECT_THROW(sample_ou(0.0, 2.0, g, rng), ParameterError);
  EXPECT_THROW(sample_ou(1.0, -1.0, g, rng), ParameterError);
}

TEST(Telegraph, EndpointsOfFlipProbability) {
  const TimeGrid g{0.0, 1e-3, 1000};
  RngStream r0(5, 0), r1(5, 1);
  const auto still = sample_telegraph(0.0, g, r0);
  for (double x : still.values) EXPECT_EQ(x, still.values[0]);
  const auto alt = sample_telegraph(1.0, g, r1);
  for (std::size_t n = 1; n < alt.values.size(); ++n) EXPECT_EQ(alt.values[n], -alt.values[n - 1]);
}

TEST(Telegraph, UnitSamplesAndFlipFraction) {
  const std::size_t n = 1000000;
  const TimeGrid g{0.0, 1e-3, n};
  RngStream rng(6, 0);
  const auto p = sample_telegraph(0.35, g, rng);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ASSERT_TRUE(p.values[i] == 1.0 || p.values[i] == -1.0);
    if (i && p.values[i] != p.values[i - 1]) ++flips;
  }
  const double se = std::sqrt(0.35 * 0.65 / (n - 1));
  EXPECT_NEAR(static_cast<double>(flips) / (n - 1), 0.35, 3.0 * se);
}

TEST(Telegraph, LagCorrelationIsPowerOfPointThree) {
  const TimeGrid g{0.0, 1e-3, 1000000};
  RngStream rng(7, 0);
  const auto K = empirical_autocorr(sample_telegraph(0.35, g, rng), 10);
  // Lag-k estimate of a +-1 chain: standard error about sqrt((1+0.09)/(1-0.09)/N).
  const double se = std::sqrt(1.09 / 0.91 / 1e6);
  for (int k = 1; k <= 10; ++k) EXPECT_NEAR(K[k] / K[0], std::pow(0.3, k), 3.0 * se) << "lag " << k;
}

TEST(Flicker, SlopesFollowExponent) {
  const TimeGrid g{0.0, 1e-3, std::size_t{1} << 20};
  std::uint64_t s = 900;
  for (double eta : {-1.0, 0.0, 2.0}) {
    RngStream rng(s++, 0);
    const auto est = periodogram(sample_flicker(1.0, eta, g, rng), 16);
    const double mid = std::sqrt(est.frequencies[1] * est.frequencies.back());
    const double tol = eta == 0.0 ? 0.1 : 0.15;
    EXPECT_NEAR(loglog_slope(est, mid / 10, mid * 10), eta, tol) << "eta " << eta;
  }
}

TEST(Flicker, ZeroMeanAndTargetVariance) {
  const TimeGrid g{0.0, 1e-3, 20001};
  RngStream rng(8, 0);
  const auto p = sample_flicker(1.0, 2.0, g, rng, 2.0);
  EXPECT_NEAR(mean(p.values), 0.0, 1e-12);
  // Deterministic rescale: the expected variance equals the target.
  EXPECT_NEAR(variance(p.values), 2.0, 0.1);
}

TEST(Flicker, UnsupportedExponent) {
  const TimeGrid g{0.0, 1e-3, 1024};
  RngStream rng(1, 0);
  EXPECT_THROW(sample_flicker(1.0, 2.5, g, rng), ParameterError);
  EXPECT_THROW(sample_flicker(1.0, -3.0, g, rng), ParameterError);
}

TEST(Mix, EndpointsAndConvexity) {
  const TimeGrid g{0.0, 0.01, 500};
  RngStream ra(1, 0), rb(1, 1);
  const auto a = sample_ou(15, 2, g, ra);
  const auto b = sample_ou(3, 1, g, rb);
  EXPECT_EQ(mix(a, b, 1.0).values, a.values);
  EXPECT_EQ(mix(a, b, 0.0).values, b.values);
  const auto m = mix(a, b, 0.3);
  for (std::size_t n = 0; n < g.n_steps; ++n) EXPECT_EQ(m.values[n], 0.3 * a.values[n] + 0.7 * b.values[n]);
}

TEST(Mix, ConstantPathsStayConstant) {
  const SampledPath ones{TimeGrid{0.0, 0.1, 50}, std::vector<double>(50, 1.0)};
  for (double x : mix(ones, ones, 0.5).values) EXPECT_EQ(x, 1.0);
}

TEST(Mix, GridMismatch) {
  const SampledPath a{TimeGrid{0.0, 0.1, 50}, std::vector<double>(50, 1.0)};
  const SampledPath b{TimeGrid{0.0, 0.2, 50}, std::vector<double>(50, 1.0)};
  EXPECT_THROW(mix(a, b, 0.5), IncompatiblePathError);
}

TEST(AnalyticPsd, OuLorentzian) {
  const OuNoise ou{7.0, 2.0};
  EXPECT_NEAR(analytic_psd(ou, 0.0), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(analytic_psd(ou, 7.0), 0.5 / kPi, 1e-15);
}

TEST(AnalyticPsd, MixtureOfIdenticalOuIsHalf) {
  const MixtureNoise m{OuNoise{15, 2}, OuNoise{15, 2}, 0.5};
  for (double w : {0.0, 3.0, 40.0}) EXPECT_NEAR(analytic_psd(m, w), 0.5 * analytic_psd(OuNoise{15, 2}, w), 1e-15);
}

TEST(AnalyticPsd, FlickerAtZeroWithNegativeExponent) {
  EXPECT_TRUE(std::isinf(analytic_psd(FlickerNoise{1.0, -1.0}, 0.0)));
}

TEST(StationaryVariance, ClosedForms) {
  EXPECT_DOUBLE_EQ(stationary_variance(OuNoise{15, 2}), 15.0);
  EXPECT_DOUBLE_EQ(stationary_variance(TelegraphNoise{0.35}), 1.0);
  EXPECT_DOUBLE_EQ(stationary_variance(MixtureNoise{OuNoise{15, 2}, TelegraphNoise{0.35}, 0.5}), 4.0);
  EXPECT_THROW(stationary_variance(FlickerNoise{1.0, 1.0}), ParameterError);
}

TEST(StationaryVariance, MixtureMatchesSampleVariance) {
  const MixtureNoise m{OuNoise{15, 2}, TelegraphNoise{0.35}, 0.5};
  const TimeGrid g{0.0, 1e-3, 1000000};
  const auto p = sample_trajectory(m, g, 77, 0);
  EXPECT_NEAR(variance(p.values), 4.0, 0.2);
}

TEST(AnalyticPsd, IntegratesToVariance) {
  const TimeGrid g{0.0, 1e-3, 20001};
  const auto ctx = SpectralContext::of(g);
  const double hi = kPi / g.dt;
  const double lo = 2.0 * kPi / g.duration();
  EXPECT_NEAR(band_integral(OuNoise{15, 2}, 1e-6, hi, ctx) / 15.0, 1.0, 0.05);
  // Telegraph power spreads past Nyquist when p_jump is large; a slow chain keeps it in band.
  EXPECT_NEAR(band_integral(TelegraphNoise{0.02}, 1e-6, hi, ctx), 1.0, 0.05);
  const FlickerNoise f{1.0, 2.0};
  EXPECT_NEAR(band_integral(f, lo, hi, ctx) / stationary_variance(f, ctx), 1.0, 0.05);
  const MixtureNoise m{OuNoise{15, 2}, TelegraphNoise{0.02}, 0.3};
  EXPECT_NEAR(band_integral(m, 1e-6, hi, ctx) / stationary_variance(m, ctx), 1.0, 0.05);
}

TEST(Trajectory, ComponentStreamsAreIndependent) {
  const TimeGrid g{0.0, 0.01, 200};
  const MixtureNoise m{OuNoise{15, 2}, OuNoise{15, 2}, 0.5};
  const auto a = sample_trajectory(OuNoise{15, 2}, g, 3, 4);
  RngStream rb(3, 4 + kSecondComponentOffset);
  const auto b = sample_ou(15, 2, g, rb);
  EXPECT_EQ(sample_trajectory(m, g, 3, 4).values, mix(a, b, 0.5).values);
}

TEST(Trajectory, SharedStreamOfIdenticalModelsIsTheLeaf) {
  const TimeGrid g{0.0, 0.01, 200};
  MixtureNoise m{OuNoise{15, 2}, OuNoise{15, 2}, 0.3, true};
  const auto leaf = sample_trajectory(OuNoise{15, 2}, g, 3, 4);
  const auto mixed = sample_trajectory(m, g, 3, 4);
  for (std::size_t n = 0; n < g.n_steps; ++n) EXPECT_NEAR(mixed.values[n], leaf.values[n], 1e-12);
}
