#include "mixnoise/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

#include "mixnoise/errors.hpp"
#include "mixnoise/experiments.hpp"
#include "mixnoise/io.hpp"
#include "mixnoise/observables.hpp"

namespace mixnoise {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string join(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s + "]";
}

template <class F>
CriterionResult timed(std::string name, double budget, F&& body) {
  CriterionResult r;
  r.name = std::move(name);
  r.budget_seconds = budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = body(r.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > budget) {
    r.passed = false;
    r.detail += "; over budget " + fmt("%.0f s", budget);
  }
  return r;
}

double amp_error(const AmplitudeState& a, const AmplitudeState& b) {
  return std::max({std::abs(a.C1 - b.C1), std::abs(a.C2 - b.C2), std::abs(a.C3 - b.C3), std::abs(a.C4 - b.C4),
                   std::abs(a.I - b.I)});
}

const Ordering* ordering_at(const SweepResult& r, double v) {
  for (const Ordering& o : r.orderings)
    if (o.axis_value == v) return &o;
  return nullptr;
}

std::string describe_ordering(const Ordering& o) {
  std::string s = join(o.labels) + (o.resolved ? "" : " unresolved") + " C=";
  for (std::size_t i = 0; i < o.values.size(); ++i)
    s += (i ? "/" : "") + fmt("%.4f", o.values[i]) + "+-" + fmt("%.4f", o.std_errors[i]);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative paths of every regular file under root, sorted.
std::vector<std::string> tree_files(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).generic_string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CriterionResult check_oracle_equivalence() {
  return timed("oracle_equivalence", 5.0, [](std::string& detail) {
    SystemParams params;
    params.noise_scale = 0.0;
    const TimeGrid grid = TimeGrid::span(0.0, 20.0, 1e-3);
    const SampledPath path{grid, std::vector<double>(grid.n_steps, 0.0)};
    const AmplitudeState init = AmplitudeState::bell();
    const TrajectoryRecord rec = run_trajectory(params, path, init, 100);
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.states.size(); ++i)
      worst = std::max(worst, amp_error(rec.states[i], analytic_constant_G(params, grid.time(rec.indices[i]), init)));
    detail = "max amplitude error " + fmt("%.3e", worst) + " over " + std::to_string(rec.states.size()) + " records";
    return worst < 1e-6;
  });
}

CriterionResult check_conservation() {
  return timed("conservation", 5.0, [](std::string& detail) {
    SystemParams params;
    params.Gamma_Q = 0.0;
    const TimeGrid grid = TimeGrid::span(0.0, 20.0, 1e-3);
    auto drift = [&](const SampledPath& path) {
      double n0 = 0.0, worst = 0.0;
      integrate(params, path.values, grid, AmplitudeState::bell(), 1, [&](std::size_t slot, const AmplitudeState& s) {
        const double n = std::norm(s.C1) + std::norm(s.C2) + std::norm(s.C3);
        if (slot == 0) n0 = n;
        worst = std::max(worst, std::abs(n - n0));
      });
      return worst;
    };
    const double d_const = drift({grid, std::vector<double>(grid.n_steps, 0.0)});
    RngStream rng(7, 0);
    const double d_noisy = drift(sample_ou(15.0, 2.0, grid, rng));
    detail = "drift constant " + fmt("%.3e", d_const) + ", O-U driven " + fmt("%.3e", d_noisy);
    return d_const < 1e-8 && d_noisy < 1e-8;
  });
}

CriterionResult check_noise_statistics() {
  return timed("noise_statistics", 60.0, [](std::string& detail) {
    bool ok = true;

    // O-U against (Gamma*gamma/2) exp(-gamma tau), tau in [0, 3/gamma].
    {
      const double gamma = 1.0, Gamma = 2.0, dt = 0.01;
      const TimeGrid grid{0.0, dt, 1000000};
      RngStream rng(101, 0);
      const SampledPath path = sample_ou(gamma, Gamma, grid, rng);
      const std::size_t max_lag = static_cast<std::size_t>(std::llround(3.0 / (gamma * dt)));
      const auto K = empirical_autocorr(path, max_lag);
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k <= max_lag; ++k) {
        const double th = 0.5 * Gamma * gamma * std::exp(-gamma * k * dt);
        num += (K[k] - th) * (K[k] - th);
        den += th * th;
      }
      const double rel = std::sqrt(num / den);
      ok = ok && rel < 0.05;
      detail += "O-U rel L2 " + fmt("%.4f", rel);
    }

    // Telegraph lag-k against (1-2p)^k; sigma from 20 batch estimates.
    {
      const double p = 0.35;
      const std::size_t n = 1000000, batches = 20, max_lag = 20;
      const TimeGrid grid{0.0, 1e-3, n};
      RngStream rng(202, 0);
      const SampledPath path = sample_telegraph(p, grid, rng);
      const auto K = empirical_autocorr(path, max_lag);
      std::vector<std::vector<double>> rho_b;
      const std::size_t len = n / batches;
      for (std::size_t b = 0; b < batches; ++b) {
        SampledPath part{TimeGrid{0.0, grid.dt, len},
                         std::vector<double>(path.values.begin() + b * len, path.values.begin() + (b + 1) * len)};
        const auto Kb = empirical_autocorr(part, max_lag);
        std::vector<double> r;
        for (double v : Kb) r.push_back(v / Kb[0]);
        rho_b.push_back(std::move(r));
      }
      double worst_z = 0.0;
      for (std::size_t k = 1; k <= max_lag; ++k) {
        double m = 0.0, v = 0.0;
        for (const auto& r : rho_b) m += r[k];
        m /= batches;
        for (const auto& r : rho_b) v += (r[k] - m) * (r[k] - m);
        const double sigma = std::sqrt(v / (batches - 1) / batches);
        const double z = std::abs(K[k] / K[0] - std::pow(1.0 - 2.0 * p, static_cast<double>(k))) / sigma;
        worst_z = std::max(worst_z, z);
      }
      ok = ok && worst_z <= 3.0;
      detail += "; telegraph worst |z| " + fmt("%.2f", worst_z);
    }

    // Flicker log-log slope over the central two decades.
    {
      const std::size_t n = std::size_t{1} << 20, segments = 16;
      const TimeGrid grid{0.0, 1e-3, n};
      std::uint64_t seed = 303;
      for (double eta : {-2.0, -1.0, 1.0, 2.0}) {
        RngStream rng(seed++, 0);
        const SampledPath path = sample_flicker(1.0, eta, grid, rng);
        const SpectrumEstimate est = periodogram(path, segments);
        const double lo = est.frequencies[1], hi = est.frequencies.back();
        const double mid = std::sqrt(lo * hi);
        const double slope = loglog_slope(est, mid / 10.0, mid * 10.0);
        ok = ok && std::abs(slope - eta) <= 0.15;
        detail += "; eta " + fmt("%g", eta) + " slope " + fmt("%.3f", slope);
      }
    }
    return ok;
  });
}

CriterionResult check_concurrence_formulas() {
  return timed("concurrence_formulas", 1.0, [](std::string& detail) {
    std::mt19937_64 gen(404);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      double w[4], s = 0.0;
      for (double& x : w) s += (x = expo(gen));
      for (double& x : w) x /= s;
      const double mag = unif(gen) * std::sqrt(w[1] * w[2]);
      const std::complex<double> r = std::polar(mag, 2.0 * kPi * unif(gen));
      DensityMatrix rho = DensityMatrix::Zero();
      for (int k = 0; k < 4; ++k) rho(k, k) = w[k];
      rho(1, 2) = r;
      rho(2, 1) = std::conj(r);
      worst = std::max(worst, std::abs(concurrence_wootters(rho) - concurrence_xstate(rho)));
    }
    detail = "max |Wootters - X-state| " + fmt("%.3e", worst) + " over 1000 states";
    return worst <= 1e-12;
  });
}

CriterionResult check_freezing(int workers) {
  return timed("freezing", 600.0, [workers](std::string& detail) {
    EnsemblePoint pt;
    pt.noise = OuNoise{100.0, 2.0};
    pt.n_traj = 1000;
    pt.master_seed = 515;
    pt.grid = TimeGrid::span(0.0, 20.0, 1e-3);
    const auto [c, se] = run_ensemble(pt, workers).at(20.0);
    EnsemblePoint base = pt;
    base.params.noise_scale = 0.0;
    base.n_traj = 1;
    const auto [c0, se0] = run_ensemble(base, workers).at(20.0);
    const double pooled = std::hypot(se, se0);
    detail = "C(20) noisy " + fmt("%.4f", c) + "+-" + fmt("%.4f", se) + " vs baseline " + fmt("%.4f", c0) +
             ", margin " + fmt("%.1f", (c - c0) / pooled) + " sigma";
    return c - c0 > 3.0 * pooled;
  });
}

CriterionResult check_fig2_orderings(const std::string& preset_dir, int workers) {
  return timed("fig2_orderings", 1800.0, [&](std::string& detail) {
    const SweepResult r = run_fig2_style(load_config(preset_dir + "/fig2.ini"), workers);
    bool ok = true;
    const std::vector<std::pair<double, std::vector<std::string>>> expected{
        {90.0, {"ou", "mixed", "violet"}}, {1.0, {"violet", "mixed", "ou"}}};
    for (const auto& [v, labels] : expected) {
      const Ordering* o = ordering_at(r, v);
      const bool hit = o && o->resolved && o->labels == labels;
      ok = ok && hit;
      detail += (detail.empty() ? "" : "; ") + fmt("gxi=%g ", v) + (o ? describe_ordering(*o) : "missing") +
                (hit ? "" : " expected " + join(labels));
    }
    for (const Ordering& o : r.orderings) {
      if (!o.resolved) continue;
      const bool match = o.matches_hf.value_or(false);
      ok = ok && match;
      if (!match) detail += fmt("; gxi=%g HF predicts ", o.axis_value) + join(o.hf_labels);
    }
    if (ok) detail += "; resolved orderings match HF prediction";
    return ok;
  });
}

CriterionResult check_fig4_orderings(const std::string& preset_dir, int workers) {
  return timed("fig4_orderings", 1800.0, [&](std::string& detail) {
    const SweepResult r = run_fig4_style(load_config(preset_dir + "/fig4.ini"), workers);
    const Ordering* hi = ordering_at(r, 1.0);
    const Ordering* mid = ordering_at(r, 0.1);
    const Ordering* lo = ordering_at(r, 0.02);
    if (!hi || !mid || !lo) {
      detail = "missing checkpoint";
      return false;
    }
    const bool ok_hi = hi->resolved && hi->labels == std::vector<std::string>{"telegraph", "ou", "mixed"};
    const bool ok_lo = lo->resolved && lo->labels.front() == "ou" && lo->labels.back() == "telegraph";
    const Cell& t = r.cell(0.1, "telegraph");
    const Cell& o = r.cell(0.1, "ou");
    const double pooled = std::hypot(t.se_eval, o.se_eval);
    const double gap = std::abs(t.c_eval - o.c_eval);
    const bool ok_mid = gap <= 2.0 * pooled;
    detail = "gQ=1 " + describe_ordering(*hi) + (ok_hi ? "" : " expected [telegraph,ou,mixed]") + "; gQ=0.02 " +
             describe_ordering(*lo) + (ok_lo ? "" : " expected ou best, telegraph worst") + "; gQ=0.1 |T-O| " +
             fmt("%.2f", gap / pooled) + " sigma" + (ok_mid ? "" : " expected <= 2");
    return ok_hi && ok_lo && ok_mid;
  });
}

CriterionResult check_fig6_trend(const std::string& preset_dir, int workers) {
  return timed("fig6_trend", 3600.0, [&](std::string& detail) {
    const SweepResult r = run_pmin_scan(load_config(preset_dir + "/fig6.ini"), workers);
    detail = "p_min";
    for (const PminPoint& p : r.pmin)
      detail += fmt(" %g:", p.axis_value) + fmt("%.2f", p.p_min) + (p.flat ? "(flat)" : "");
    const bool ok = r.pmin_non_increasing.value_or(false);
    detail += ok ? ", non-increasing" : ", not monotone";
    return ok;
  });
}

CriterionResult check_determinism(const std::string& preset_dir, const std::string& scratch_dir) {
  return timed("determinism", 300.0, [&](std::string& detail) {
    struct Run {
      std::string name;
      std::vector<std::string> overrides;
    };
    const std::vector<Run> runs{
        {"fig2", {"ensemble.n_traj=200", "grid.t_end=5", "experiment.t_eval=5", "experiment.values=1,90"}},
        {"fig4", {"ensemble.n_traj=200", "grid.t_end=5", "experiment.t_eval=5", "experiment.values=0.1,1"}}};
    bool ok = true;
    std::size_t compared = 0;
    for (const Run& run : runs) {
      Config cfg = load_config(preset_dir + "/" + run.name + ".ini");
      for (const auto& o : run.overrides) apply_override(cfg, o);
      const fs::path d1 = fs::path(scratch_dir) / run.name / "w1";
      const fs::path d8 = fs::path(scratch_dir) / run.name / "w8";
      fs::remove_all(d1);
      fs::remove_all(d8);
      run_and_write(cfg, d1.string(), 1);
      run_and_write(cfg, d8.string(), 8);
      const auto f1 = tree_files(d1), f8 = tree_files(d8);
      if (f1 != f8) {
        ok = false;
        detail += run.name + ": file sets differ; ";
        continue;
      }
      for (const auto& f : f1) {
        if (f.size() < 4 || f.compare(f.size() - 4, 4, ".csv") != 0) continue;
        ++compared;
        if (slurp(d1 / f) != slurp(d8 / f)) {
          ok = false;
          detail += run.name + "/" + f + " differs; ";
        }
      }
    }
    detail += std::to_string(compared) + " CSV files compared at workers 1 and 8";
    return ok && compared > 0;
  });
}

CriterionResult check_dt_convergence(const EnsemblePoint& point) {
  return timed("dt_convergence", 60.0, [&](std::string& detail) {
    EnsemblePoint a = point;
    a.params.noise_scale = 0.0;
    a.n_traj = 1;
    EnsemblePoint b = a;
    b.grid = TimeGrid::span(a.grid.t0, a.grid.t_end(), a.grid.dt / 2.0);
    b.stride = a.stride * 2;
    const ConvergenceReport rep = convergence_check(run_ensemble(a, 1), run_ensemble(b, 1), 1e-3);
    detail = "dt " + fmt("%g", a.grid.dt) + " vs dt/2: max |dC| " + fmt("%.3e", rep.max_abs_diff) + " at t=" +
             fmt("%g", rep.worst_time);
    return rep.pass;
  });
}

std::vector<NamedCriterion> acceptance_criteria(const AcceptanceOptions& opts) {
  const std::string dir = opts.preset_dir;
  const int w = opts.workers;
  const std::string scratch = opts.scratch_dir;
  return {
      {"oracle_equivalence", false, [] { return check_oracle_equivalence(); }},
      {"conservation", false, [] { return check_conservation(); }},
      {"noise_statistics", false, [] { return check_noise_statistics(); }},
      {"concurrence_formulas", false, [] { return check_concurrence_formulas(); }},
      {"freezing", true, [w] { return check_freezing(w); }},
      {"fig2_orderings", true, [dir, w] { return check_fig2_orderings(dir, w); }},
      {"fig4_orderings", true, [dir, w] { return check_fig4_orderings(dir, w); }},
      {"fig6_trend", true, [dir, w] { return check_fig6_trend(dir, w); }},
      {"determinism", true, [dir, scratch] { return check_determinism(dir, scratch); }},
  };
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const NamedCriterion& c : acceptance_criteria(opts)) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.name) == opts.only.end()) continue;
    if (opts.quick && c.heavy) continue;
    out.push_back(c.run());
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace mixnoise
