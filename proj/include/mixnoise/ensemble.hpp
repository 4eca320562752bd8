#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mixnoise/dynamics.hpp"
#include "mixnoise/grid.hpp"
#include "mixnoise/noise.hpp"
#include "mixnoise/observables.hpp"

namespace mixnoise {

struct EnsemblePoint {
  SystemParams params;
  NoiseModel noise = OuNoise{};
  std::size_t n_traj = 1000;
  std::uint64_t master_seed = 20240611;
  TimeGrid grid;
  std::size_t stride = 100;
  AmplitudeState init = AmplitudeState::bell();

  void validate() const;
};

struct RhoEntries {
  double p_eg = 0.0;
  double p_ge = 0.0;
  double re_coherence = 0.0;
  double im_coherence = 0.0;
};

struct EnsembleResult {
  ConcurrenceSeries concurrence;
  std::vector<RhoEntries> rho;
  std::vector<double> mean_norm;
  // Mean of per-trajectory 2|C1||C2|; bounds the ensemble concurrence.
  std::vector<double> mean_pure_concurrence;
  std::size_t n_traj = 0;
  std::size_t n_batches = 0;
  std::uint64_t master_seed = 0;
  std::string config_digest;

  const std::vector<double>& times() const { return concurrence.times; }
  // Concurrence and its standard error at the recorded time nearest t.
  std::pair<double, double> at(double t) const;
};

struct ConvergenceReport {
  double max_abs_diff = 0.0;
  double worst_time = 0.0;
  bool pass = true;  // max < tol, or an exact match
};

inline constexpr std::size_t kBatches = 20;

// workers <= 0 means all available threads.
EnsembleResult run_ensemble(const EnsemblePoint& point, int workers = 0);
// Single-threaded reference; bit-identical to run_ensemble.
EnsembleResult run_ensemble_serial(const EnsemblePoint& point);

ConvergenceReport convergence_check(const EnsembleResult& r1, const EnsembleResult& r2, double tol);

// Stable text form of a point, hashed into config_digest.
std::string canonical_text(const EnsemblePoint& point);
std::string canonical_text(const NoiseModel& model);

int available_workers();

}  // namespace mixnoise
