#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixnoise/config.hpp"
#include "mixnoise/ensemble.hpp"
#include "mixnoise/spectral.hpp"

namespace mixnoise {

struct Cell {
  double axis_value = 0.0;
  double p = 0.0;  // NaN for the no-classical-noise baseline
  std::string label;
  double c_eval = 0.0;
  double se_eval = 0.0;
  EnsembleResult result;
};

// Best-to-worst ordering of the labelled cells at one axis value. Resolved
// only when every adjacent gap exceeds 3 pooled standard errors.
struct Ordering {
  double axis_value = 0.0;
  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<double> std_errors;
  bool resolved = false;
  std::vector<std::string> hf_labels;  // predicted by HF spectral area, if computed
  std::optional<bool> matches_hf;
};

struct PminPoint {
  double axis_value = 0.0;
  double p_min = 0.0;
  double c_min = 0.0;
  std::vector<double> near_min;  // grid p within 3 pooled sigma of the minimum
  bool flat = false;
};

struct SweepResult {
  std::string experiment;
  std::string axis;
  std::vector<double> axis_values;
  std::vector<double> p_values;
  double t_eval = 20.0;
  std::vector<Cell> cells;
  std::vector<Ordering> orderings;
  std::vector<PminPoint> pmin;
  std::optional<bool> pmin_non_increasing;
  std::vector<std::string> warnings;

  const Cell& cell(double axis_value, const std::string& label) const;
};

struct PsdModelReport {
  std::string label;
  NoiseModel model;
  HfReport analytic;
  HfReport estimated;
  double variance = 0.0;
};

struct PsdReport {
  double omega_c = 0.0;
  double band_max = 0.0;
  std::vector<PsdModelReport> models;
  std::vector<std::string> ranking_power;
  std::vector<std::string> ranking_fraction;
  std::vector<double> omega;
  std::vector<std::vector<double>> analytic;  // per model, then the quantum Lorentzian
  SpectrumEstimate estimate_axis;
  std::vector<std::vector<double>> estimated;
};

// Label of a mixing weight: 1 -> label_a, 0 -> label_b, else "mixed".
std::string weight_label(const ExperimentSpec& spec, double p);

Ordering order_cells(double axis_value, const std::vector<const Cell*>& cells);

// Point for one sweep cell: the axis key is rewritten and re-parsed.
EnsemblePoint cell_point(const Config& cfg, const ExperimentSpec& spec, double axis_value, double p);

EnsembleResult run_single(const Config& cfg, int workers);
SweepResult run_fig2_style(const Config& cfg, int workers);
SweepResult run_fig4_style(const Config& cfg, int workers);
SweepResult run_pmin_scan(const Config& cfg, int workers);
PsdReport run_psd_report(const Config& cfg);

// Quantum-noise Lorentzian (1/2pi) Gamma_Q gamma_Q^2 / (w^2 + gamma_Q^2).
double quantum_psd(const SystemParams& params, double omega);

}  // namespace mixnoise
