#include "mixnoise/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mixnoise/errors.hpp"

namespace mixnoise {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& file) {
  const fs::path p(file);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file);
  return out;
}

void stamp(std::ostream& os, const Provenance& prov) {
  os << "# experiment=" << prov.experiment << " config_digest=" << prov.config_digest
     << " master_seed=" << prov.seed << "\n";
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

json grid_json(const EnsemblePoint& pt) {
  return json{{"t0", pt.grid.t0}, {"dt", pt.grid.dt}, {"n_steps", pt.grid.n_steps}, {"stride", pt.stride}};
}

json base_json(const ExperimentSpec& spec, const Provenance& prov) {
  json j;
  j["experiment"] = prov.experiment;
  j["config_digest"] = prov.config_digest;
  j["seed"] = prov.seed;
  j["n_traj"] = spec.base.n_traj;
  j["grid"] = grid_json(spec.base);
  j["noise"] = canonical_text(spec.base.noise);
  j["checkpoints"] = spec.axis_values;
  j["orderings"] = json::array();
  j["warnings"] = json::array();
  return j;
}

void write_json(const std::string& file, const json& j) {
  auto out = open_out(file);
  out << j.dump(2) << "\n";
}

void write_series(const std::string& dir, const EnsembleResult& r, const Provenance& prov) {
  const auto& t = r.times();
  {
    auto out = open_out(dir + "/concurrence.csv");
    stamp(out, prov);
    out << "t,C,stderr\n";
    for (std::size_t i = 0; i < t.size(); ++i)
      out << format_double(t[i]) << "," << format_double(r.concurrence.values[i]) << ","
          << format_double(r.concurrence.std_error[i]) << "\n";
  }
  {
    auto out = open_out(dir + "/rho.csv");
    stamp(out, prov);
    out << "t,rho_eg_eg,rho_ge_ge,re_rho_eg_ge,im_rho_eg_ge\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& e = r.rho[i];
      out << format_double(t[i]) << "," << format_double(e.p_eg) << "," << format_double(e.p_ge) << ","
          << format_double(e.re_coherence) << "," << format_double(e.im_coherence) << "\n";
    }
  }
  {
    auto out = open_out(dir + "/norm.csv");
    stamp(out, prov);
    out << "t,mean_norm,mean_pure_concurrence\n";
    for (std::size_t i = 0; i < t.size(); ++i)
      out << format_double(t[i]) << "," << format_double(r.mean_norm[i]) << ","
          << format_double(r.mean_pure_concurrence[i]) << "\n";
  }
}

json ordering_json(const Ordering& o) {
  json j{{"axis_value", o.axis_value}, {"labels", o.labels},         {"values", o.values},
         {"std_errors", o.std_errors}, {"resolved", o.resolved},     {"hf_labels", o.hf_labels}};
  j["matches_hf"] = o.matches_hf ? json(*o.matches_hf) : json(nullptr);
  return j;
}

json hf_json(const HfReport& r) {
  return json{{"omega_c", r.omega_c}, {"hf_fraction", r.hf_fraction}, {"total_power", r.total_power},
              {"hf_power", r.hf_power}};
}

std::string cell_dir(std::size_t i, const Cell& c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cell_%03zu_", i);
  std::string label = c.label;
  for (char& ch : label)
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
  return std::string(buf) + label;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_path_csv(const std::string& file, const SampledPath& path, const Provenance& prov) {
  auto out = open_out(file);
  stamp(out, prov);
  out << "t,xi\n";
  for (std::size_t n = 0; n < path.values.size(); ++n)
    out << format_double(path.grid.time(n)) << "," << format_double(path.values[n]) << "\n";
}

void write_trajectory_csv(const std::string& file, const TrajectoryRecord& rec, const Provenance& prov) {
  auto out = open_out(file);
  stamp(out, prov);
  out << "t,re_C1,im_C1,re_C2,im_C2,re_C3,im_C3,re_I,im_I,norm\n";
  for (std::size_t i = 0; i < rec.states.size(); ++i) {
    const auto& s = rec.states[i];
    out << format_double(rec.grid.time(rec.indices[i]));
    for (const cplx& c : {s.C1, s.C2, s.C3, s.I}) out << "," << format_double(c.real()) << "," << format_double(c.imag());
    out << "," << format_double(s.norm()) << "\n";
  }
}

void write_spectrum_csv(const std::string& file, const SpectrumEstimate& est, const Provenance& prov) {
  auto out = open_out(file);
  stamp(out, prov);
  out << "omega,density\n";
  for (std::size_t k = 0; k < est.frequencies.size(); ++k)
    out << format_double(est.frequencies[k]) << "," << format_double(est.densities[k]) << "\n";
}

void write_ensemble(const std::string& dir, const EnsembleResult& r, const ExperimentSpec& spec,
                    const Provenance& prov) {
  write_series(dir, r, prov);
  json j = base_json(spec, prov);
  j["n_traj"] = r.n_traj;
  j["ensemble_digest"] = r.config_digest;
  write_json(dir + "/result.json", j);
  auto gp = open_out(dir + "/plot.gp");
  gp << "# config_digest=" << prov.config_digest << " master_seed=" << prov.seed << "\n"
     << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'omega t'\nset ylabel 'C'\n"
     << "plot 'concurrence.csv' using 1:2:3 with yerrorlines title 'C(t)'\n";
}

void write_sweep(const std::string& dir, const SweepResult& r, const ExperimentSpec& spec, const Provenance& prov) {
  {
    auto out = open_out(dir + "/summary.csv");
    stamp(out, prov);
    out << "axis_value,p,label,C_eval,stderr\n";
    for (const Cell& c : r.cells)
      out << format_double(c.axis_value) << "," << (std::isnan(c.p) ? std::string("") : format_double(c.p)) << ","
          << quoted(c.label) << "," << format_double(c.c_eval) << "," << format_double(c.se_eval) << "\n";
  }
  for (std::size_t i = 0; i < r.cells.size(); ++i) write_series(dir + "/cells/" + cell_dir(i, r.cells[i]), r.cells[i].result, prov);
  if (!r.orderings.empty()) {
    auto out = open_out(dir + "/orderings.csv");
    stamp(out, prov);
    out << "axis_value,rank,label,C_eval,stderr,resolved,hf_label\n";
    for (const Ordering& o : r.orderings)
      for (std::size_t k = 0; k < o.labels.size(); ++k)
        out << format_double(o.axis_value) << "," << k + 1 << "," << quoted(o.labels[k]) << ","
            << format_double(o.values[k]) << "," << format_double(o.std_errors[k]) << ","
            << (o.resolved ? "true" : "false") << "," << (k < o.hf_labels.size() ? quoted(o.hf_labels[k]) : "")
            << "\n";
  }
  if (!r.pmin.empty()) {
    auto out = open_out(dir + "/pmin.csv");
    stamp(out, prov);
    out << "axis_value,p_min,C_min,flat,n_near_min\n";
    for (const PminPoint& p : r.pmin)
      out << format_double(p.axis_value) << "," << format_double(p.p_min) << "," << format_double(p.c_min) << ","
          << (p.flat ? "true" : "false") << "," << p.near_min.size() << "\n";
  }

  json j = base_json(spec, prov);
  j["axis"] = r.axis;
  j["p_values"] = r.p_values;
  j["t_eval"] = r.t_eval;
  for (const Ordering& o : r.orderings) j["orderings"].push_back(ordering_json(o));
  for (const auto& w : r.warnings) j["warnings"].push_back(w);
  if (!r.pmin.empty()) {
    j["pmin"] = json::array();
    for (const PminPoint& p : r.pmin)
      j["pmin"].push_back({{"axis_value", p.axis_value}, {"p_min", p.p_min}, {"C_min", p.c_min}, {"flat", p.flat},
                           {"near_min", p.near_min}});
    j["pmin_non_increasing"] = r.pmin_non_increasing.value_or(false);
  }
  write_json(dir + "/result.json", j);

  auto gp = open_out(dir + "/plot.gp");
  gp << "# config_digest=" << prov.config_digest << " master_seed=" << prov.seed << "\n"
     << "set datafile separator ','\nset xlabel 'omega t'\nset ylabel 'C'\nplot \\\n";
  for (std::size_t i = 0; i < r.cells.size(); ++i)
    gp << "  'cells/" << cell_dir(i, r.cells[i]) << "/concurrence.csv' using 1:2 with lines title '" << r.cells[i].label
       << " " << r.axis << "=" << format_double(r.cells[i].axis_value) << "'" << (i + 1 < r.cells.size() ? ", \\\n" : "\n");
  if (!r.pmin.empty()) {
    auto gp2 = open_out(dir + "/pmin.gp");
    gp2 << "# config_digest=" << prov.config_digest << " master_seed=" << prov.seed << "\n"
        << "set datafile separator ','\nset xlabel '" << r.axis << "'\nset ylabel 'p_min'\n"
        << "plot 'pmin.csv' using 1:2 with linespoints title 'p_min'\n";
  }
}

void write_psd(const std::string& dir, const PsdReport& r, const ExperimentSpec& spec, const Provenance& prov) {
  {
    auto out = open_out(dir + "/psd_analytic.csv");
    stamp(out, prov);
    out << "omega";
    for (const auto& m : r.models) out << "," << quoted(m.label);
    out << ",quantum\n";
    for (std::size_t i = 0; i < r.omega.size(); ++i) {
      out << format_double(r.omega[i]);
      for (const auto& col : r.analytic) out << "," << format_double(col[i]);
      out << "\n";
    }
  }
  {
    auto out = open_out(dir + "/psd_estimate.csv");
    stamp(out, prov);
    out << "omega";
    for (const auto& m : r.models) out << "," << quoted(m.label);
    out << "\n";
    for (std::size_t k = 0; k < r.estimate_axis.frequencies.size(); ++k) {
      out << format_double(r.estimate_axis.frequencies[k]);
      for (const auto& col : r.estimated) out << "," << format_double(col[k]);
      out << "\n";
    }
  }
  {
    auto out = open_out(dir + "/hf.csv");
    stamp(out, prov);
    out << "label,variance,omega_c,hf_fraction,hf_power,total_power,est_hf_fraction,est_hf_power,est_total_power\n";
    for (const auto& m : r.models)
      out << quoted(m.label) << "," << format_double(m.variance) << "," << format_double(m.analytic.omega_c) << ","
          << format_double(m.analytic.hf_fraction) << "," << format_double(m.analytic.hf_power) << ","
          << format_double(m.analytic.total_power) << "," << format_double(m.estimated.hf_fraction) << ","
          << format_double(m.estimated.hf_power) << "," << format_double(m.estimated.total_power) << "\n";
  }
  json j = base_json(spec, prov);
  j["omega_c"] = r.omega_c;
  j["band_max"] = r.band_max;
  j["ranking_hf_power"] = r.ranking_power;
  j["ranking_hf_fraction"] = r.ranking_fraction;
  j["models"] = json::array();
  for (const auto& m : r.models)
    j["models"].push_back({{"label", m.label}, {"model", canonical_text(m.model)}, {"variance", m.variance},
                           {"analytic", hf_json(m.analytic)}, {"estimated", hf_json(m.estimated)}});
  write_json(dir + "/result.json", j);

  auto gp = open_out(dir + "/plot.gp");
  gp << "# config_digest=" << prov.config_digest << " master_seed=" << prov.seed << "\n"
     << "set datafile separator ','\nset logscale xy\nset xlabel 'omega'\nset ylabel 'J(omega)'\n"
     << "set arrow from " << format_double(r.omega_c) << ", graph 0 to " << format_double(r.omega_c)
     << ", graph 1 nohead dashtype 2\nplot \\\n";
  for (std::size_t i = 0; i < r.models.size(); ++i)
    gp << "  'psd_analytic.csv' using 1:" << i + 2 << " with lines title '" << r.models[i].label << "', \\\n";
  gp << "  'psd_analytic.csv' using 1:" << r.models.size() + 2 << " with lines dashtype 3 title 'quantum'\n";
}

void run_and_write(const Config& cfg, const std::string& dir, int workers) {
  const ExperimentSpec spec = build_experiment(cfg);
  const Provenance prov{to_string(spec.kind), config_digest(cfg), spec.base.master_seed};
  switch (spec.kind) {
    case ExperimentKind::single:
      write_ensemble(dir, run_single(cfg, workers), spec, prov);
      break;
    case ExperimentKind::gamma_xi_sweep:
      write_sweep(dir, run_fig2_style(cfg, workers), spec, prov);
      break;
    case ExperimentKind::gamma_q_sweep:
      write_sweep(dir, run_fig4_style(cfg, workers), spec, prov);
      break;
    case ExperimentKind::pmin_scan:
      write_sweep(dir, run_pmin_scan(cfg, workers), spec, prov);
      break;
    case ExperimentKind::psd_report:
      write_psd(dir, run_psd_report(cfg), spec, prov);
      break;
    case ExperimentKind::validate:
      throw ConfigError("run_and_write: validate is not a data-producing experiment");
  }
}

}  // namespace mixnoise
