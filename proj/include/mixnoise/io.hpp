#pragma once

#include <cstdint>
#include <string>

#include "mixnoise/dynamics.hpp"
#include "mixnoise/ensemble.hpp"
#include "mixnoise/experiments.hpp"
#include "mixnoise/spectral.hpp"

namespace mixnoise {

// Stamped into every emitted file.
struct Provenance {
  std::string experiment;
  std::string config_digest;
  std::uint64_t seed = 0;
};

// 17 significant digits.
std::string format_double(double x);

void write_path_csv(const std::string& file, const SampledPath& path, const Provenance& prov);
void write_trajectory_csv(const std::string& file, const TrajectoryRecord& rec, const Provenance& prov);
void write_spectrum_csv(const std::string& file, const SpectrumEstimate& est, const Provenance& prov);

// concurrence.csv, rho.csv, norm.csv and result.json.
void write_ensemble(const std::string& dir, const EnsembleResult& r, const ExperimentSpec& spec, const Provenance& prov);
void write_sweep(const std::string& dir, const SweepResult& r, const ExperimentSpec& spec, const Provenance& prov);
void write_psd(const std::string& dir, const PsdReport& r, const ExperimentSpec& spec, const Provenance& prov);

// Runs the experiment named by experiment.kind and writes its files to dir.
void run_and_write(const Config& cfg, const std::string& dir, int workers);

}  // namespace mixnoise
