#pragma once

#include <boost/property_tree/ptree.hpp>
#include <string>
#include <vector>

#include "mixnoise/ensemble.hpp"

namespace mixnoise {

enum class ExperimentKind { single, gamma_xi_sweep, gamma_q_sweep, pmin_scan, psd_report, validate };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& text);

// INI text: sections [experiment], [system], [grid], [ensemble], [noise],
// [noise_a], [noise_b]. Keys are addressed as "section.key".
struct Config {
  boost::property_tree::ptree tree;
};

Config load_config(const std::string& path);
Config parse_config_text(const std::string& text);
// "section.key=value"
void apply_override(Config& cfg, const std::string& assignment);
void set_value(Config& cfg, const std::string& key, const std::string& value);
void set_value(Config& cfg, const std::string& key, double value);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::single;
  EnsemblePoint base;
  std::string axis;
  std::vector<double> axis_values;
  std::vector<double> p_values;
  double t_eval = 20.0;
  std::string label_a = "a";
  std::string label_b = "b";
  double omega_c_factor = 1.0;
  std::size_t psd_samples = 1 << 18;
  std::size_t psd_segments = 32;
  int workers = 0;
};

ExperimentKind kind_of(const Config& cfg);
SystemParams build_system(const Config& cfg);
NoiseModel build_noise(const Config& cfg);
EnsemblePoint build_point(const Config& cfg);
ExperimentSpec build_experiment(const Config& cfg);

// Effective configuration in canonical form (defaults filled in, workers
// excluded) and its SHA-256.
std::string canonical_config_text(const Config& cfg);
std::string config_digest(const Config& cfg);

// Directory holding the shipped preset files.
std::string preset_dir();

}  // namespace mixnoise
