#include "mixnoise/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mixnoise/digest.hpp"
#include "mixnoise/errors.hpp"

#ifndef MIXNOISE_PRESET_DIR
#define MIXNOISE_PRESET_DIR "configs"
#endif

namespace mixnoise {

namespace pt = boost::property_tree;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<std::string> raw(const Config& cfg, const std::string& key) {
  auto v = cfg.tree.get_optional<std::string>(key);
  if (!v) return std::nullopt;
  std::string t = trim(*v);
  if (t.empty()) return std::nullopt;
  return t;
}

double to_double(const std::string& key, const std::string& text) {
  if (text == "pi/2") return std::numbers::pi / 2;
  if (text == "pi") return std::numbers::pi;
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " = '" + text + "' is not a number");
  }
}

double get_double(const Config& cfg, const std::string& key, double fallback) {
  auto v = raw(cfg, key);
  return v ? to_double(key, *v) : fallback;
}

std::optional<double> get_optional_double(const Config& cfg, const std::string& key) {
  auto v = raw(cfg, key);
  if (!v) return std::nullopt;
  return to_double(key, *v);
}

std::uint64_t get_count(const Config& cfg, const std::string& key, std::uint64_t fallback) {
  auto v = raw(cfg, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    if (!v->empty() && (*v)[0] == '-') throw std::invalid_argument(*v);
    unsigned long long x = std::stoull(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " = '" + *v + "' is not a non-negative integer");
  }
}

bool get_bool(const Config& cfg, const std::string& key, bool fallback) {
  auto v = raw(cfg, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("config: " + key + " = '" + *v + "' is not a boolean");
}

std::string get_string(const Config& cfg, const std::string& key, const std::string& fallback) {
  auto v = raw(cfg, key);
  return v ? *v : fallback;
}

// "1, 15, 90" or "start:step:end".
std::vector<double> get_list(const Config& cfg, const std::string& key, std::vector<double> fallback) {
  auto v = raw(cfg, key);
  if (!v) return fallback;
  std::vector<double> out;
  if (v->find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(to_double(key, trim(item)));
    if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0])
      throw ConfigError("config: " + key + " range must be start:step:end");
    const auto count = static_cast<std::size_t>(std::llround((parts[2] - parts[0]) / parts[1]));
    for (std::size_t i = 0; i <= count; ++i)
      out.push_back(std::round((parts[0] + static_cast<double>(i) * parts[1]) * 1e12) / 1e12);
    return out;
  }
  std::string text = *v;
  for (char& c : text)
    if (c == ',') c = ' ';
  std::stringstream ss(text);
  std::string item;
  while (ss >> item) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError("config: " + key + " is an empty list");
  return out;
}

LeafNoise default_leaf(ExperimentKind kind, char which) {
  switch (kind) {
    case ExperimentKind::gamma_xi_sweep:
    case ExperimentKind::psd_report:
      if (which == 'a') return FlickerNoise{1.0, 2.0, std::nullopt};
      return OuNoise{15.0, 2.0};
    case ExperimentKind::gamma_q_sweep:
      if (which == 'a') return TelegraphNoise{0.35, 1.0};
      return OuNoise{15.0, 2.0};
    case ExperimentKind::pmin_scan:
      if (which == 'a') return OuNoise{15.0, 2.0};
      return FlickerNoise{1.0, 2.0, std::nullopt};
    default:
      return OuNoise{15.0, 2.0};
  }
}

LeafNoise parse_leaf(const Config& cfg, const std::string& section, const LeafNoise& fallback) {
  const std::string fallback_type = std::holds_alternative<OuNoise>(fallback)        ? "ou"
                                    : std::holds_alternative<FlickerNoise>(fallback) ? "flicker"
                                                                                     : "telegraph";
  const std::string type = get_string(cfg, section + ".type", fallback_type);
  const bool same = type == fallback_type;
  if (type == "ou") {
    OuNoise d = same ? std::get<OuNoise>(fallback) : OuNoise{};
    return OuNoise{get_double(cfg, section + ".gamma_xi", d.gamma_xi), get_double(cfg, section + ".Gamma_xi", d.Gamma_xi)};
  }
  if (type == "flicker") {
    FlickerNoise d = same ? std::get<FlickerNoise>(fallback) : FlickerNoise{};
    FlickerNoise f{get_double(cfg, section + ".A", d.A), get_double(cfg, section + ".eta", d.eta), d.target_variance};
    if (auto v = get_optional_double(cfg, section + ".variance")) f.target_variance = *v;
    return f;
  }
  if (type == "telegraph") {
    TelegraphNoise d = same ? std::get<TelegraphNoise>(fallback) : TelegraphNoise{};
    return TelegraphNoise{get_double(cfg, section + ".p_jump", d.p_jump), get_double(cfg, section + ".level", d.level)};
  }
  throw ConfigError("config: " + section + ".type = '" + type + "' (expected ou, flicker or telegraph)");
}

std::string leaf_label(const LeafNoise& leaf) {
  if (std::holds_alternative<OuNoise>(leaf)) return "ou";
  if (std::holds_alternative<TelegraphNoise>(leaf)) return "telegraph";
  const double eta = std::get<FlickerNoise>(leaf).eta;
  if (eta == 2.0) return "violet";
  if (eta == 1.0) return "blue";
  if (eta == 0.0) return "white";
  if (eta == -1.0) return "pink";
  if (eta == -2.0) return "red";
  return "flicker";
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

template <class Fn>
auto wrap_parameter_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::single: return "single";
    case ExperimentKind::gamma_xi_sweep: return "gamma_xi_sweep";
    case ExperimentKind::gamma_q_sweep: return "gamma_q_sweep";
    case ExperimentKind::pmin_scan: return "pmin_scan";
    case ExperimentKind::psd_report: return "psd_report";
    case ExperimentKind::validate: return "validate";
  }
  return "single";
}

ExperimentKind parse_kind(const std::string& text) {
  for (auto k : {ExperimentKind::single, ExperimentKind::gamma_xi_sweep, ExperimentKind::gamma_q_sweep,
                 ExperimentKind::pmin_scan, ExperimentKind::psd_report, ExperimentKind::validate})
    if (to_string(k) == text) return k;
  throw ConfigError("config: unknown experiment kind '" + text + "'");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  try {
    pt::ini_parser::read_ini(ss, cfg.tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

void set_value(Config& cfg, const std::string& key, const std::string& value) {
  if (key.find('.') == std::string::npos) throw ConfigError("config: key '" + key + "' must be section.key");
  cfg.tree.put(key, value);
}

void set_value(Config& cfg, const std::string& key, double value) { set_value(cfg, key, num(value)); }

void apply_override(Config& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("config: override '" + assignment + "' must be key=value");
  set_value(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

ExperimentKind kind_of(const Config& cfg) { return parse_kind(get_string(cfg, "experiment.kind", "single")); }

SystemParams build_system(const Config& cfg) {
  SystemParams p;
  p.Gamma_Q = get_double(cfg, "system.Gamma_Q", p.Gamma_Q);
  p.gamma_Q = get_double(cfg, "system.gamma_Q", p.gamma_Q);
  const double g0 = get_double(cfg, "system.G0", 1.0);
  p.G0 = {get_double(cfg, "system.G01", g0), get_double(cfg, "system.G02", g0)};
  p.kappa = get_double(cfg, "system.kappa", p.kappa);
  const double kx = get_double(cfg, "system.kappa_x0", std::numbers::pi / 2);
  const double x0 = get_double(cfg, "system.x0", kx / p.kappa);
  p.x0 = {get_double(cfg, "system.x01", x0), get_double(cfg, "system.x02", x0)};
  p.noise_scale = get_double(cfg, "system.noise_scale", p.noise_scale);
  wrap_parameter_errors([&] { p.validate(); return 0; });
  return p;
}

NoiseModel build_noise(const Config& cfg) {
  const ExperimentKind kind = kind_of(cfg);
  const bool sweep = kind == ExperimentKind::gamma_xi_sweep || kind == ExperimentKind::gamma_q_sweep ||
                     kind == ExperimentKind::pmin_scan || kind == ExperimentKind::psd_report;
  const std::string type = get_string(cfg, "noise.type", sweep ? "mixture" : "ou");
  NoiseModel model;
  if (type == "mixture") {
    MixtureNoise m;
    m.a = parse_leaf(cfg, "noise_a", default_leaf(kind, 'a'));
    m.b = parse_leaf(cfg, "noise_b", default_leaf(kind, 'b'));
    m.p = get_double(cfg, "noise.p", 0.5);
    m.shared = get_bool(cfg, "noise.shared", false);
    model = m;
  } else {
    model = to_model(parse_leaf(cfg, "noise", default_leaf(kind, 'a')));
  }
  wrap_parameter_errors([&] { validate(model); return 0; });
  return model;
}

EnsemblePoint build_point(const Config& cfg) {
  const ExperimentKind kind = kind_of(cfg);
  EnsemblePoint pt;
  pt.params = build_system(cfg);
  pt.noise = build_noise(cfg);
  const double t0 = get_double(cfg, "grid.t0", 0.0);
  const double t_end = get_double(cfg, "grid.t_end", kind == ExperimentKind::gamma_q_sweep ? 50.0 : 20.0);
  const double dt = get_double(cfg, "grid.dt", 1e-3);
  pt.grid = wrap_parameter_errors([&] { return TimeGrid::span(t0, t_end, dt); });
  pt.stride = get_count(cfg, "grid.stride", 0);
  if (pt.stride == 0) pt.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 / dt)));
  pt.n_traj = get_count(cfg, "ensemble.n_traj", 1000);
  pt.master_seed = get_count(cfg, "ensemble.seed", pt.master_seed);
  wrap_parameter_errors([&] { pt.validate(); return 0; });
  return pt;
}

ExperimentSpec build_experiment(const Config& cfg) {
  ExperimentSpec s;
  s.kind = kind_of(cfg);
  s.base = build_point(cfg);
  s.t_eval = get_double(cfg, "experiment.t_eval", 20.0);
  s.omega_c_factor = get_double(cfg, "experiment.omega_c_factor", 1.0);
  s.psd_samples = get_count(cfg, "experiment.psd_samples", s.psd_samples);
  s.psd_segments = get_count(cfg, "experiment.psd_segments", s.psd_segments);
  s.workers = static_cast<int>(get_count(cfg, "ensemble.workers", 0));
  switch (s.kind) {
    case ExperimentKind::gamma_xi_sweep:
      s.axis = get_string(cfg, "experiment.axis", "noise_b.gamma_xi");
      s.axis_values = get_list(cfg, "experiment.values", {1.0, 15.0, 90.0});
      s.p_values = get_list(cfg, "experiment.p_values", {0.0, 0.5, 1.0});
      break;
    case ExperimentKind::gamma_q_sweep:
      s.axis = get_string(cfg, "experiment.axis", "system.gamma_Q");
      s.axis_values = get_list(cfg, "experiment.values", {0.02, 0.1, 1.0});
      s.p_values = get_list(cfg, "experiment.p_values", {1.0, 0.0, 0.5});
      break;
    case ExperimentKind::pmin_scan:
      s.axis = get_string(cfg, "experiment.axis", "noise_a.gamma_xi");
      s.axis_values = get_list(cfg, "experiment.values", {10.0, 15.0, 20.0, 25.0, 30.0});
      s.p_values = get_list(cfg, "experiment.p_values", {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                                                         0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0});
      break;
    default:
      break;
  }
  for (double p : s.p_values)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("config: experiment.p_values must lie in [0, 1]");
  if (const auto* m = std::get_if<MixtureNoise>(&s.base.noise)) {
    s.label_a = get_string(cfg, "experiment.label_a", leaf_label(m->a));
    s.label_b = get_string(cfg, "experiment.label_b", leaf_label(m->b));
  } else if (!s.p_values.empty()) {
    throw ConfigError("config: sweep experiments need noise.type = mixture");
  }
  if (s.kind != ExperimentKind::psd_report && s.kind != ExperimentKind::validate) {
    if (s.t_eval < s.base.grid.t0 || s.t_eval > s.base.grid.t_end() + 1e-12)
      throw ConfigError("config: experiment.t_eval outside the grid");
  }
  return s;
}

std::string canonical_config_text(const Config& cfg) {
  const ExperimentSpec s = build_experiment(cfg);
  std::string text = canonical_text(s.base);
  text += "experiment kind=" + to_string(s.kind) + " axis=" + s.axis + " values=" + join(s.axis_values) +
          " p_values=" + join(s.p_values) + " t_eval=" + num(s.t_eval) + " label_a=" + s.label_a +
          " label_b=" + s.label_b + " omega_c_factor=" + num(s.omega_c_factor) +
          " psd_samples=" + std::to_string(s.psd_samples) + " psd_segments=" + std::to_string(s.psd_segments) + "\n";
  return text;
}

std::string config_digest(const Config& cfg) { return sha256_hex(canonical_config_text(cfg)); }

std::string preset_dir() { return MIXNOISE_PRESET_DIR; }

}  // namespace mixnoise
