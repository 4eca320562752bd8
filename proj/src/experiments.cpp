#include "mixnoise/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mixnoise/errors.hpp"

namespace mixnoise {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<std::string> hf_prediction(const EnsemblePoint& pt, const ExperimentSpec& spec,
                                       const std::vector<const Cell*>& cells) {
  const auto* mix = std::get_if<MixtureNoise>(&pt.noise);
  if (!mix || cells.size() < 2) return {};
  std::vector<NoiseModel> models;
  std::vector<std::string> labels;
  for (const Cell* c : cells) {
    MixtureNoise m = *mix;
    m.p = c->p;
    models.push_back(m);
    labels.push_back(c->label);
  }
  const double omega_c = spec.omega_c_factor * pt.params.gamma_Q;
  const double band = kPi / pt.grid.dt;
  auto order = rank_by_hf_fraction(models, omega_c, band, SpectralContext::of(pt.grid), RankKey::power);
  std::vector<std::string> out;
  for (std::size_t i : order) out.push_back(labels[i]);
  return out;
}

Cell make_cell(double axis_value, double p, std::string label, EnsembleResult r, double t_eval) {
  Cell c;
  c.axis_value = axis_value;
  c.p = p;
  c.label = std::move(label);
  auto [v, se] = r.at(t_eval);
  c.c_eval = v;
  c.se_eval = se;
  c.result = std::move(r);
  return c;
}

// Runs every (axis value, p) cell and records orderings with HF predictions.
SweepResult run_grid(const Config& cfg, const ExperimentSpec& spec, int workers, bool baseline, bool with_hf) {
  SweepResult out;
  out.experiment = to_string(spec.kind);
  out.axis = spec.axis;
  out.axis_values = spec.axis_values;
  out.p_values = spec.p_values;
  out.t_eval = spec.t_eval;
  for (double v : spec.axis_values) {
    for (double p : spec.p_values) {
      EnsemblePoint pt = cell_point(cfg, spec, v, p);
      out.cells.push_back(make_cell(v, p, weight_label(spec, p), run_ensemble(pt, workers), spec.t_eval));
    }
    if (baseline) {
      EnsemblePoint pt = cell_point(cfg, spec, v, spec.p_values.front());
      pt.params.noise_scale = 0.0;
      pt.n_traj = 1;
      out.cells.push_back(make_cell(v, std::numeric_limits<double>::quiet_NaN(), "none", run_ensemble(pt, workers),
                                    spec.t_eval));
    }
  }
  if (spec.kind == ExperimentKind::pmin_scan) return out;
  for (double v : spec.axis_values) {
    std::vector<const Cell*> group;
    for (const Cell& c : out.cells)
      if (c.axis_value == v && !std::isnan(c.p)) group.push_back(&c);
    Ordering o = order_cells(v, group);
    if (with_hf) {
      o.hf_labels = hf_prediction(cell_point(cfg, spec, v, 0.5), spec, group);
      if (o.resolved) o.matches_hf = o.hf_labels == o.labels;
    }
    if (!o.resolved) out.warnings.push_back("ordering at " + spec.axis + "=" + num(v) + " unresolved at 3 sigma");
    out.orderings.push_back(std::move(o));
  }
  return out;
}

}  // namespace

const Cell& SweepResult::cell(double axis_value, const std::string& label) const {
  for (const Cell& c : cells)
    if (c.axis_value == axis_value && c.label == label) return c;
  throw ParameterError("sweep: no cell " + label + " at " + num(axis_value));
}

std::string weight_label(const ExperimentSpec& spec, double p) {
  if (p == 1.0) return spec.label_a;
  if (p == 0.0) return spec.label_b;
  if (p == 0.5) return "mixed";
  return "p=" + num(p);
}

Ordering order_cells(double axis_value, const std::vector<const Cell*>& cells) {
  std::vector<const Cell*> sorted = cells;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Cell* a, const Cell* b) { return a->c_eval > b->c_eval; });
  Ordering o;
  o.axis_value = axis_value;
  o.resolved = !sorted.empty();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    o.labels.push_back(sorted[i]->label);
    o.values.push_back(sorted[i]->c_eval);
    o.std_errors.push_back(sorted[i]->se_eval);
    if (i > 0) {
      const double gap = sorted[i - 1]->c_eval - sorted[i]->c_eval;
      const double pooled = std::hypot(sorted[i - 1]->se_eval, sorted[i]->se_eval);
      if (!(gap > 3.0 * pooled)) o.resolved = false;
    }
  }
  return o;
}

EnsemblePoint cell_point(const Config& cfg, const ExperimentSpec& spec, double axis_value, double p) {
  Config c = cfg;
  if (!spec.axis.empty()) set_value(c, spec.axis, axis_value);
  set_value(c, "noise.p", p);
  return build_point(c);
}

EnsembleResult run_single(const Config& cfg, int workers) { return run_ensemble(build_point(cfg), workers); }

SweepResult run_fig2_style(const Config& cfg, int workers) {
  const ExperimentSpec spec = build_experiment(cfg);
  if (spec.kind != ExperimentKind::gamma_xi_sweep) throw ConfigError("fig2-style run needs kind = gamma_xi_sweep");
  return run_grid(cfg, spec, workers, false, true);
}

SweepResult run_fig4_style(const Config& cfg, int workers) {
  const ExperimentSpec spec = build_experiment(cfg);
  if (spec.kind != ExperimentKind::gamma_q_sweep) throw ConfigError("fig4-style run needs kind = gamma_q_sweep");
  return run_grid(cfg, spec, workers, true, true);
}

SweepResult run_pmin_scan(const Config& cfg, int workers) {
  const ExperimentSpec spec = build_experiment(cfg);
  if (spec.kind != ExperimentKind::pmin_scan) throw ConfigError("pmin scan needs kind = pmin_scan");
  SweepResult out = run_grid(cfg, spec, workers, false, false);
  for (double v : spec.axis_values) {
    std::vector<const Cell*> row;
    for (const Cell& c : out.cells)
      if (c.axis_value == v) row.push_back(&c);
    const Cell* best = row.front();
    for (const Cell* c : row)
      if (c->c_eval < best->c_eval || (c->c_eval == best->c_eval && c->p < best->p)) best = c;
    PminPoint pm;
    pm.axis_value = v;
    pm.p_min = best->p;
    pm.c_min = best->c_eval;
    for (const Cell* c : row)
      if (c->c_eval - best->c_eval <= 3.0 * std::hypot(c->se_eval, best->se_eval)) pm.near_min.push_back(c->p);
    std::sort(pm.near_min.begin(), pm.near_min.end());
    pm.flat = pm.near_min.size() > 1;
    if (pm.flat)
      out.warnings.push_back("flat minimum at " + spec.axis + "=" + num(v) + ": " +
                             std::to_string(pm.near_min.size()) + " grid points within 3 sigma; p_min is the argmin");
    out.pmin.push_back(pm);
  }
  bool ok = true;
  for (std::size_t i = 1; i < out.pmin.size(); ++i)
    if (out.pmin[i].p_min > out.pmin[i - 1].p_min) ok = false;
  out.pmin_non_increasing = ok;
  return out;
}

double quantum_psd(const SystemParams& params, double omega) {
  const double g2 = params.gamma_Q * params.gamma_Q;
  return params.Gamma_Q * g2 / (2.0 * kPi * (omega * omega + g2));
}

PsdReport run_psd_report(const Config& cfg) {
  const ExperimentSpec spec = build_experiment(cfg);
  const EnsemblePoint& base = spec.base;
  PsdReport rep;
  rep.omega_c = spec.omega_c_factor * base.params.gamma_Q;
  rep.band_max = kPi / base.grid.dt;
  const SpectralContext ctx = SpectralContext::of(base.grid);

  if (const auto* m = std::get_if<MixtureNoise>(&base.noise)) {
    rep.models.push_back({spec.label_a, to_model(m->a), {}, {}, 0.0});
    rep.models.push_back({spec.label_b, to_model(m->b), {}, {}, 0.0});
    rep.models.push_back({"mixed", *m, {}, {}, 0.0});
  } else {
    rep.models.push_back({"noise", base.noise, {}, {}, 0.0});
  }

  const TimeGrid sgrid{0.0, base.grid.dt, spec.psd_samples};
  std::vector<NoiseModel> models;
  for (auto& pm : rep.models) {
    pm.analytic = hf_fraction(pm.model, rep.omega_c, rep.band_max, ctx);
    pm.variance = stationary_variance(pm.model, ctx);
    models.push_back(pm.model);
  }

  const double lo = std::max(rep.omega_c * 1e-3, 2.0 * kPi / base.grid.duration());
  const std::size_t n_omega = 400;
  for (std::size_t i = 0; i < n_omega; ++i)
    rep.omega.push_back(lo * std::pow(rep.band_max / lo, static_cast<double>(i) / (n_omega - 1)));
  for (const auto& pm : rep.models) {
    std::vector<double> col;
    for (double w : rep.omega) col.push_back(analytic_psd(pm.model, w, ctx));
    rep.analytic.push_back(std::move(col));
  }
  std::vector<double> q;
  for (double w : rep.omega) q.push_back(quantum_psd(base.params, w));
  rep.analytic.push_back(std::move(q));

  for (auto& pm : rep.models) {
    SampledPath path = sample_trajectory(pm.model, sgrid, base.master_seed, 0);
    SpectrumEstimate est = periodogram(path, spec.psd_segments);
    pm.estimated = hf_fraction(est, rep.omega_c, rep.band_max);
    rep.estimate_axis.frequencies = est.frequencies;
    rep.estimate_axis.resolution = est.resolution;
    rep.estimate_axis.n_segments = est.n_segments;
    rep.estimated.push_back(std::move(est.densities));
  }

  if (models.size() >= 2) {
    for (std::size_t i : rank_by_hf_fraction(models, rep.omega_c, rep.band_max, ctx, RankKey::power))
      rep.ranking_power.push_back(rep.models[i].label);
    for (std::size_t i : rank_by_hf_fraction(models, rep.omega_c, rep.band_max, ctx, RankKey::fraction))
      rep.ranking_fraction.push_back(rep.models[i].label);
  }
  return rep;
}

}  // namespace mixnoise
