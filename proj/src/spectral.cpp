#include "mixnoise/spectral.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "mixnoise/errors.hpp"

namespace mixnoise {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_divergent_low_end(const LeafNoise& leaf) {
  if (const auto* f = std::get_if<FlickerNoise>(&leaf)) return f->eta < 0.0;
  return false;
}

bool has_atom_at_zero(const LeafNoise& leaf) {
  if (const auto* t = std::get_if<TelegraphNoise>(&leaf)) return t->p_jump == 0.0;
  return false;
}

std::vector<LeafNoise> leaves(const NoiseModel& model) {
  if (const auto* m = std::get_if<MixtureNoise>(&model)) return {m->a, m->b};
  return {std::visit([](const auto& x) -> LeafNoise {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, MixtureNoise>)
      return x.a;
    else
      return x;
  }, model)};
}

// Adaptive Gauss-Kronrod over [a, b], split on a log ladder so narrow
// Lorentzians near zero are resolved.
template <class F>
double integrate(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  std::vector<double> knots{a};
  for (double x = b * 1e-9; x < b; x *= 10.0)
    if (x > a) knots.push_back(x);
  knots.push_back(b);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, knots[i], knots[i + 1], 15, 1e-12);
  return sum;
}

// Trapezoid integral of a tabulated density between lo and hi, with linear
// interpolation at the limits.
double trapz(const std::vector<double>& w, const std::vector<double>& s, double lo, double hi) {
  auto value_at = [&](double x) {
    auto it = std::upper_bound(w.begin(), w.end(), x);
    if (it == w.begin()) return s.front();
    if (it == w.end()) return s.back();
    std::size_t i = static_cast<std::size_t>(it - w.begin());
    double f = (x - w[i - 1]) / (w[i] - w[i - 1]);
    return s[i - 1] + f * (s[i] - s[i - 1]);
  };
  double sum = 0.0;
  double x_prev = lo;
  double y_prev = value_at(lo);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= lo) continue;
    if (w[i] >= hi) break;
    sum += 0.5 * (y_prev + s[i]) * (w[i] - x_prev);
    x_prev = w[i];
    y_prev = s[i];
  }
  sum += 0.5 * (y_prev + value_at(hi)) * (hi - x_prev);
  return sum;
}

}  // namespace

SpectrumEstimate periodogram(const SampledPath& path, std::size_t n_segments) {
  if (n_segments < 1) throw ParameterError("periodogram: need at least one segment");
  const std::size_t N = path.values.size();
  const std::size_t L = n_segments == 1 ? N : (2 * N) / (n_segments + 1);
  if (L < 64)
    throw ParameterError("periodogram: path of " + std::to_string(N) + " samples too short for " +
                         std::to_string(n_segments) + " segments");
  const std::size_t hop = L / 2;
  const double dt = path.grid.dt;

  std::vector<double> window(L);
  double U = 0.0;
  for (std::size_t n = 0; n < L; ++n) {
    window[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(n) / static_cast<double>(L)));
    U += window[n] * window[n];
  }
  U /= static_cast<double>(L);

  SpectrumEstimate est;
  est.n_segments = n_segments;
  est.resolution = 2.0 * kPi / (static_cast<double>(L) * dt);
  est.frequencies.resize(L / 2 + 1);
  est.densities.assign(L / 2 + 1, 0.0);
  for (std::size_t k = 0; k < est.frequencies.size(); ++k) est.frequencies[k] = est.resolution * static_cast<double>(k);

  const double norm = dt / (2.0 * kPi * static_cast<double>(L) * U * static_cast<double>(n_segments));
  std::vector<double> seg(L);
  for (std::size_t s = 0; s < n_segments; ++s) {
    const auto first = path.values.begin() + static_cast<std::ptrdiff_t>(s * hop);
    const double mean = std::accumulate(first, first + static_cast<std::ptrdiff_t>(L), 0.0) / static_cast<double>(L);
    for (std::size_t n = 0; n < L; ++n) seg[n] = window[n] * (first[static_cast<std::ptrdiff_t>(n)] - mean);
    auto X = detail::rfft(seg);
    for (std::size_t k = 0; k < X.size(); ++k) est.densities[k] += std::norm(X[k]) * norm;
  }
  return est;
}

double total_power(const SpectrumEstimate& spectrum) {
  return 2.0 * trapz(spectrum.frequencies, spectrum.densities, spectrum.frequencies.front(),
                     spectrum.frequencies.back());
}

std::vector<double> empirical_autocorr(const SampledPath& path, std::size_t max_lag) {
  const std::size_t N = path.values.size();
  if (N == 0 || max_lag >= N / 10)
    throw ParameterError("empirical_autocorr: max_lag must be below n_steps/10");
  const double mean = std::accumulate(path.values.begin(), path.values.end(), 0.0) / static_cast<double>(N);
  std::vector<double> y(N);
  for (std::size_t n = 0; n < N; ++n) y[n] = path.values[n] - mean;
  std::vector<double> K(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t n = 0; n + k < N; ++n) s += y[n] * y[n + k];
    K[k] = s / static_cast<double>(N);
  }
  return K;
}

double lowest_resolvable_frequency(const NoiseModel& model, const SpectralContext& ctx) {
  const auto parts = leaves(model);
  if (std::any_of(parts.begin(), parts.end(), has_atom_at_zero))
    throw ParameterError("hf_fraction: spectrum has an atom at zero frequency");
  if (std::any_of(parts.begin(), parts.end(), has_divergent_low_end)) {
    if (!ctx.grid) throw ParameterError("hf_fraction: flicker with eta < 0 needs a declared grid");
    return 2.0 * kPi / ctx.grid->duration();
  }
  return 0.0;
}

HfReport hf_fraction(const NoiseModel& model, double omega_c, double band_max, const SpectralContext& ctx) {
  validate(model);
  const double lo = lowest_resolvable_frequency(model, ctx);
  if (!(omega_c > lo && omega_c < band_max))
    throw ParameterError("hf_fraction: omega_c outside the resolvable band");
  auto J = [&](double w) { return analytic_psd(model, w, ctx); };
  const double low = integrate(J, lo, omega_c);
  const double high = integrate(J, omega_c, band_max);
  HfReport r;
  r.omega_c = omega_c;
  r.total_power = 2.0 * (low + high);
  if (!(r.total_power > 0.0)) throw ParameterError("hf_fraction: zero total power in band");
  r.hf_fraction = high / (low + high);
  r.hf_power = 2.0 * high;
  return r;
}

HfReport hf_fraction(const SpectrumEstimate& spectrum, double omega_c, double band_max) {
  const auto& w = spectrum.frequencies;
  if (w.size() < 2) throw ParameterError("hf_fraction: empty spectrum");
  const double hi = std::min(band_max, w.back());
  if (!(omega_c > w.front() && omega_c < hi)) throw ParameterError("hf_fraction: omega_c outside the resolvable band");
  const double low = trapz(w, spectrum.densities, w.front(), omega_c);
  const double high = trapz(w, spectrum.densities, omega_c, hi);
  HfReport r;
  r.omega_c = omega_c;
  r.total_power = 2.0 * (low + high);
  if (!(r.total_power > 0.0)) throw ParameterError("hf_fraction: zero total power in band");
  r.hf_fraction = high / (low + high);
  r.hf_power = 2.0 * high;
  return r;
}

std::vector<std::size_t> rank_by_hf_fraction(const std::vector<NoiseModel>& models, double omega_c, double band_max,
                                             const SpectralContext& ctx, RankKey key) {
  if (models.size() < 2) throw ParameterError("rank_by_hf_fraction: need at least two models");
  std::vector<double> score;
  score.reserve(models.size());
  for (const auto& m : models) {
    HfReport r = hf_fraction(m, omega_c, band_max, ctx);
    score.push_back(key == RankKey::power ? r.hf_power : r.hf_fraction);
  }
  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return score[i] > score[j]; });
  return order;
}

double loglog_slope(const SpectrumEstimate& spectrum, double w_lo, double w_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k) {
    const double w = spectrum.frequencies[k];
    if (w < w_lo || w > w_hi || !(spectrum.densities[k] > 0.0)) continue;
    const double x = std::log(w);
    const double y = std::log(spectrum.densities[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw ParameterError("loglog_slope: fewer than two bins in range");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace mixnoise
