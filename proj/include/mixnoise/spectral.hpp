#pragma once

#include <cstddef>
#include <vector>

#include "mixnoise/grid.hpp"
#include "mixnoise/noise.hpp"

namespace mixnoise {

// Welch estimate on w >= 0 in the same two-sided convention as analytic_psd.
struct SpectrumEstimate {
  std::vector<double> frequencies;
  std::vector<double> densities;
  std::size_t n_segments = 0;
  double resolution = 0.0;
};

struct HfReport {
  double omega_c = 0.0;
  double hf_fraction = 0.0;
  double total_power = 0.0;
  double hf_power = 0.0;  // hf_fraction * total_power
};

enum class RankKey { power, fraction };

// Hann window, 50% overlap, segment length floor(2N/(K+1)).
SpectrumEstimate periodogram(const SampledPath& path, std::size_t n_segments);
// 2 * trapezoid integral of the estimate, i.e. its implied variance.
double total_power(const SpectrumEstimate& spectrum);

// Biased estimator after mean removal; K[0] is the sample variance.
std::vector<double> empirical_autocorr(const SampledPath& path, std::size_t max_lag);

HfReport hf_fraction(const NoiseModel& model, double omega_c, double band_max, const SpectralContext& ctx = {});
HfReport hf_fraction(const SpectrumEstimate& spectrum, double omega_c, double band_max);

// Descending order of hf_power (or hf_fraction); ties keep input order.
std::vector<std::size_t> rank_by_hf_fraction(const std::vector<NoiseModel>& models, double omega_c, double band_max,
                                             const SpectralContext& ctx = {}, RankKey key = RankKey::power);

// Least-squares slope of log S against log w over [w_lo, w_hi].
double loglog_slope(const SpectrumEstimate& spectrum, double w_lo, double w_hi);

// Lowest frequency at which a model's spectrum is integrable.
double lowest_resolvable_frequency(const NoiseModel& model, const SpectralContext& ctx);

}  // namespace mixnoise
