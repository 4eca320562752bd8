#include "mixnoise/noise.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fft.hpp"
#include "mixnoise/errors.hpp"

namespace mixnoise {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool same_leaf(const LeafNoise& x, const LeafNoise& y) {
  if (x.index() != y.index()) return false;
  return std::visit(
      overloaded{
          [&](const OuNoise& a) {
            const auto& b = std::get<OuNoise>(y);
            return a.gamma_xi == b.gamma_xi && a.Gamma_xi == b.Gamma_xi;
          },
          [&](const FlickerNoise& a) {
            const auto& b = std::get<FlickerNoise>(y);
            return a.A == b.A && a.eta == b.eta && a.target_variance == b.target_variance;
          },
          [&](const TelegraphNoise& a) {
            const auto& b = std::get<TelegraphNoise>(y);
            return a.p_jump == b.p_jump && a.level == b.level;
          }},
      x);
}

void validate_leaf(const LeafNoise& leaf) {
  std::visit(overloaded{[](const OuNoise& m) {
                          if (!(m.gamma_xi > 0.0)) throw ParameterError("ou: gamma_xi must be positive");
                          if (!(m.Gamma_xi > 0.0)) throw ParameterError("ou: Gamma_xi must be positive");
                        },
                        [](const FlickerNoise& m) {
                          if (!(m.A > 0.0)) throw ParameterError("flicker: A must be positive");
                          if (!(m.eta >= -2.0 && m.eta <= 2.0))
                            throw ParameterError("flicker: unsupported exponent eta outside [-2, 2]");
                          if (m.target_variance && !(*m.target_variance > 0.0))
                            throw ParameterError("flicker: target variance must be positive");
                        },
                        [](const TelegraphNoise& m) {
                          if (!(m.p_jump >= 0.0 && m.p_jump <= 1.0))
                            throw ParameterError("telegraph: p_jump must lie in [0, 1]");
                          if (!(m.level > 0.0)) throw ParameterError("telegraph: level must be positive");
                        }},
             leaf);
}

void check_weight(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("mixture: p must lie in [0, 1]");
}

std::string describe_leaf(const LeafNoise& leaf) {
  std::ostringstream os;
  std::visit(overloaded{[&](const OuNoise& m) { os << "ou(gamma_xi=" << m.gamma_xi << ", Gamma_xi=" << m.Gamma_xi << ")"; },
                        [&](const FlickerNoise& m) {
                          os << "flicker(A=" << m.A << ", eta=" << m.eta;
                          if (m.target_variance) os << ", variance=" << *m.target_variance;
                          os << ")";
                        },
                        [&](const TelegraphNoise& m) {
                          os << "telegraph(p_jump=" << m.p_jump;
                          if (m.level != 1.0) os << ", level=" << m.level;
                          os << ")";
                        }},
             leaf);
  return os.str();
}

const TimeGrid& require_grid(const SpectralContext& ctx) {
  if (!ctx.grid) throw ParameterError("flicker: band-limited quantity needs a declared grid");
  return *ctx.grid;
}

double flicker_scale(const FlickerNoise& m, const SpectralContext& ctx) {
  if (!m.target_variance) return 1.0;
  const TimeGrid& g = require_grid(ctx);
  return *m.target_variance / flicker_band_power(m.A, m.eta, 2.0 * kPi / g.duration(), kPi / g.dt);
}

double leaf_psd(const LeafNoise& leaf, double omega, const SpectralContext& ctx) {
  return std::visit(
      overloaded{[&](const OuNoise& m) {
                   const double g2 = m.gamma_xi * m.gamma_xi;
                   return m.Gamma_xi * g2 / (2.0 * kPi * (omega * omega + g2));
                 },
                 [&](const FlickerNoise& m) {
                   if (omega == 0.0) {
                     if (m.eta < 0.0) return std::numeric_limits<double>::infinity();
                     if (m.eta > 0.0) return 0.0;
                   }
                   return flicker_scale(m, ctx) * m.A * std::pow(omega, m.eta);
                 },
                 [&](const TelegraphNoise& m) {
                   if (!(ctx.dt_ref > 0.0)) throw ParameterError("telegraph: dt_ref must be positive");
                   const double r = m.p_jump / ctx.dt_ref;
                   const double l2 = m.level * m.level;
                   if (r == 0.0) return omega == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
                   return l2 * 2.0 * r / (kPi * (omega * omega + 4.0 * r * r));
                 }},
      leaf);
}

double leaf_variance(const LeafNoise& leaf, const SpectralContext& ctx) {
  return std::visit(overloaded{[](const OuNoise& m) { return m.Gamma_xi * m.gamma_xi / 2.0; },
                               [&](const FlickerNoise& m) {
                                 if (m.target_variance) return *m.target_variance;
                                 const TimeGrid& g = require_grid(ctx);
                                 return flicker_band_power(m.A, m.eta, 2.0 * kPi / g.duration(), kPi / g.dt);
                               },
                               [](const TelegraphNoise& m) { return m.level * m.level; }},
                    leaf);
}

}  // namespace

NoiseModel to_model(const LeafNoise& leaf) {
  return std::visit([](const auto& m) -> NoiseModel { return m; }, leaf);
}

std::string describe(const NoiseModel& model) {
  return std::visit(overloaded{[](const MixtureNoise& m) {
                                 std::ostringstream os;
                                 os << "mixture(p=" << m.p << ", a=" << describe_leaf(m.a)
                                    << ", b=" << describe_leaf(m.b) << (m.shared ? ", shared" : "") << ")";
                                 return os.str();
                               },
                               [](const auto& m) { return describe_leaf(LeafNoise{m}); }},
                    model);
}

void validate(const NoiseModel& model) {
  std::visit(overloaded{[](const MixtureNoise& m) {
                          validate_leaf(m.a);
                          validate_leaf(m.b);
                          check_weight(m.p);
                        },
                        [](const auto& m) { validate_leaf(LeafNoise{m}); }},
             model);
}

SampledPath sample_ou(double gamma_xi, double Gamma_xi, const TimeGrid& grid, RngStream& rng) {
  validate_leaf(OuNoise{gamma_xi, Gamma_xi});
  grid.validate();
  const double var = Gamma_xi * gamma_xi / 2.0;
  const double phi = std::exp(-gamma_xi * grid.dt);
  const double s = std::sqrt(var * (1.0 - phi * phi));
  SampledPath path{grid, std::vector<double>(grid.n_steps)};
  double x = std::sqrt(var) * rng.normal();
  path.values[0] = x;
  for (std::size_t n = 1; n < grid.n_steps; ++n) {
    x = x * phi + s * rng.normal();
    path.values[n] = x;
  }
  return path;
}

SampledPath sample_telegraph(double p_jump, const TimeGrid& grid, RngStream& rng, double level) {
  validate_leaf(TelegraphNoise{p_jump, level});
  grid.validate();
  SampledPath path{grid, std::vector<double>(grid.n_steps)};
  double x = rng.uniform() < 0.5 ? level : -level;
  path.values[0] = x;
  for (std::size_t n = 1; n < grid.n_steps; ++n) {
    if (rng.bernoulli(p_jump)) x = -x;
    path.values[n] = x;
  }
  return path;
}

double flicker_band_power(double A, double eta, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw ParameterError("flicker: invalid band");
  if (eta == -1.0) return 2.0 * A * std::log(hi / lo);
  return 2.0 * A * (std::pow(hi, eta + 1.0) - std::pow(lo, eta + 1.0)) / (eta + 1.0);
}

double flicker_synthesis_variance(double A, double eta, const TimeGrid& grid) {
  const std::size_t n = grid.n_steps;
  const double dw = 2.0 * kPi / (static_cast<double>(n) * grid.dt);
  double v = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double J = A * std::pow(dw * static_cast<double>(k), eta);
    v += (2 * k == n ? 1.0 : 2.0) * J * dw;
  }
  return v;
}

SampledPath sample_flicker(double A, double eta, const TimeGrid& grid, RngStream& rng,
                           std::optional<double> target_variance) {
  validate_leaf(FlickerNoise{A, eta, target_variance});
  grid.validate();
  const std::size_t n = grid.n_steps;
  const double dw = 2.0 * kPi / (static_cast<double>(n) * grid.dt);
  double scale = 1.0;
  if (target_variance) scale = *target_variance / flicker_synthesis_variance(A, eta, grid);

  std::vector<std::complex<double>> X(n / 2 + 1);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double J = scale * A * std::pow(dw * static_cast<double>(k), eta);
    if (2 * k == n) {
      X[k] = {std::sqrt(J * dw) * rng.normal(), 0.0};
    } else {
      const double c = std::sqrt(J * dw / 2.0);
      const double re = rng.normal();
      const double im = rng.normal();
      X[k] = {c * re, c * im};
    }
  }
  return SampledPath{grid, detail::irfft(X, n)};
}

SampledPath mix(const SampledPath& path_a, const SampledPath& path_b, double p) {
  check_weight(p);
  if (!(path_a.grid == path_b.grid) || path_a.values.size() != path_b.values.size())
    throw IncompatiblePathError("mix: paths live on different grids");
  SampledPath out{path_a.grid, std::vector<double>(path_a.values.size())};
  const double q = 1.0 - p;
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = p * path_a.values[n] + q * path_b.values[n];
  return out;
}

SampledPath sample(const LeafNoise& leaf, const TimeGrid& grid, RngStream& rng) {
  return std::visit(overloaded{[&](const OuNoise& m) { return sample_ou(m.gamma_xi, m.Gamma_xi, grid, rng); },
                               [&](const FlickerNoise& m) {
                                 return sample_flicker(m.A, m.eta, grid, rng, m.target_variance);
                               },
                               [&](const TelegraphNoise& m) { return sample_telegraph(m.p_jump, grid, rng, m.level); }},
                    leaf);
}

SampledPath sample_trajectory(const NoiseModel& model, const TimeGrid& grid, std::uint64_t master_seed,
                              std::uint64_t j) {
  return std::visit(overloaded{[&](const MixtureNoise& m) {
                                 RngStream ra(master_seed, j);
                                 RngStream rb(master_seed, m.shared ? j : j + kSecondComponentOffset);
                                 // Endpoint weights reproduce a component exactly; skip the other.
                                 if (m.p == 1.0) return sample(m.a, grid, ra);
                                 if (m.p == 0.0) return sample(m.b, grid, rb);
                                 return mix(sample(m.a, grid, ra), sample(m.b, grid, rb), m.p);
                               },
                               [&](const auto& m) {
                                 RngStream r(master_seed, j);
                                 return sample(LeafNoise{m}, grid, r);
                               }},
                    model);
}

double analytic_psd(const NoiseModel& model, double omega, const SpectralContext& ctx) {
  if (!(omega >= 0.0)) throw ParameterError("analytic_psd: omega must be non-negative");
  return std::visit(overloaded{[&](const MixtureNoise& m) {
                                 if (m.shared) {
                                   if (!same_leaf(m.a, m.b))
                                     throw ParameterError("analytic_psd: shared-stream mixture of distinct models");
                                   return leaf_psd(m.a, omega, ctx);
                                 }
                                 const double q = 1.0 - m.p;
                                 double ja = m.p == 0.0 ? 0.0 : m.p * m.p * leaf_psd(m.a, omega, ctx);
                                 double jb = q == 0.0 ? 0.0 : q * q * leaf_psd(m.b, omega, ctx);
                                 return ja + jb;
                               },
                               [&](const auto& m) { return leaf_psd(LeafNoise{m}, omega, ctx); }},
                    model);
}

double stationary_variance(const NoiseModel& model, const SpectralContext& ctx) {
  validate(model);
  return std::visit(overloaded{[&](const MixtureNoise& m) {
                                 if (m.shared) {
                                   if (!same_leaf(m.a, m.b))
                                     throw ParameterError("stationary_variance: shared-stream mixture of distinct models");
                                   return leaf_variance(m.a, ctx);
                                 }
                                 const double q = 1.0 - m.p;
                                 double va = m.p == 0.0 ? 0.0 : m.p * m.p * leaf_variance(m.a, ctx);
                                 double vb = q == 0.0 ? 0.0 : q * q * leaf_variance(m.b, ctx);
                                 return va + vb;
                               },
                               [&](const auto& m) { return leaf_variance(LeafNoise{m}, ctx); }},
                    model);
}

}  // namespace mixnoise
