#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "mixnoise/grid.hpp"

namespace mixnoise {

struct OuNoise {
  double gamma_xi = 15.0;  // correlation rate
  double Gamma_xi = 2.0;   // strength; variance is Gamma_xi*gamma_xi/2
};

// Power law J(w) = A w^eta. With target_variance set, paths are rescaled so
// their expected variance equals it.
struct FlickerNoise {
  double A = 1.0;
  double eta = 2.0;
  std::optional<double> target_variance;
};

// Per-step sign flips with probability p_jump; samples are +-level.
struct TelegraphNoise {
  double p_jump = 0.35;
  double level = 1.0;
};

using LeafNoise = std::variant<OuNoise, FlickerNoise, TelegraphNoise>;

// xi = p*xi_a + (1-p)*xi_b. Components use separate streams unless shared is
// set, in which case both are drawn from the same stream.
struct MixtureNoise {
  LeafNoise a;
  LeafNoise b;
  double p = 0.5;
  bool shared = false;
};

using NoiseModel = std::variant<OuNoise, FlickerNoise, TelegraphNoise, MixtureNoise>;

NoiseModel to_model(const LeafNoise& leaf);
std::string describe(const NoiseModel& model);
void validate(const NoiseModel& model);

SampledPath sample_ou(double gamma_xi, double Gamma_xi, const TimeGrid& grid, RngStream& rng);
SampledPath sample_telegraph(double p_jump, const TimeGrid& grid, RngStream& rng, double level = 1.0);
SampledPath sample_flicker(double A, double eta, const TimeGrid& grid, RngStream& rng,
                           std::optional<double> target_variance = std::nullopt);
SampledPath mix(const SampledPath& path_a, const SampledPath& path_b, double p);

SampledPath sample(const LeafNoise& leaf, const TimeGrid& grid, RngStream& rng);

// Path for trajectory j: component a (or a leaf) on stream j, component b on
// stream j + 2^32.
SampledPath sample_trajectory(const NoiseModel& model, const TimeGrid& grid, std::uint64_t master_seed,
                              std::uint64_t j);
inline constexpr std::uint64_t kSecondComponentOffset = std::uint64_t{1} << 32;

// Reference values for analytic spectra. dt_ref turns a per-step flip
// probability into a rate; grid fixes the flicker band [2pi/T, pi/dt].
struct SpectralContext {
  double dt_ref = 1e-3;
  std::optional<TimeGrid> grid;

  static SpectralContext of(const TimeGrid& g) { return {g.dt, g}; }
};

// Two-sided density on w >= 0: variance = 2 * int_0^inf J(w) dw.
double analytic_psd(const NoiseModel& model, double omega, const SpectralContext& ctx = {});
double stationary_variance(const NoiseModel& model, const SpectralContext& ctx = {});

// Band-limited 2*int A w^eta over [lo, hi].
double flicker_band_power(double A, double eta, double lo, double hi);
// Expected variance of sample_flicker before any rescale.
double flicker_synthesis_variance(double A, double eta, const TimeGrid& grid);

}  // namespace mixnoise
