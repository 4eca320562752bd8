#include "mixnoise/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "mixnoise/digest.hpp"
#include "mixnoise/errors.hpp"
#include "mixnoise/omp.hpp"

namespace mixnoise {

namespace {

// Per-record accumulators: |C1|^2, |C2|^2, Re and Im of C1 conj(C2), norm,
// 2|C1||C2|.
constexpr std::size_t kFields = 6;
constexpr std::size_t kChunk = 512;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string leaf_text(const LeafNoise& leaf) {
  std::ostringstream os;
  if (const auto* m = std::get_if<OuNoise>(&leaf)) {
    os << "ou gamma_xi=" << num(m->gamma_xi) << " Gamma_xi=" << num(m->Gamma_xi);
  } else if (const auto* m = std::get_if<FlickerNoise>(&leaf)) {
    os << "flicker A=" << num(m->A) << " eta=" << num(m->eta)
       << " variance=" << (m->target_variance ? num(*m->target_variance) : "raw");
  } else if (const auto* m = std::get_if<TelegraphNoise>(&leaf)) {
    os << "telegraph p_jump=" << num(m->p_jump) << " level=" << num(m->level);
  }
  return os.str();
}

struct Work {
  const EnsemblePoint& point;
  std::size_t n_rec;
  std::vector<std::size_t> indices;
};

void run_one(const Work& w, std::size_t j, double* row) {
  const EnsemblePoint& pt = w.point;
  SampledPath path = sample_trajectory(pt.noise, pt.grid, pt.master_seed, j);
  integrate(pt.params, path.values, pt.grid, pt.init, pt.stride, [&](std::size_t slot, const AmplitudeState& s) {
    double* r = row + slot * kFields;
    const cplx c = s.C1 * std::conj(s.C2);
    r[0] = std::norm(s.C1);
    r[1] = std::norm(s.C2);
    r[2] = c.real();
    r[3] = c.imag();
    r[4] = s.norm();
    r[5] = pure_concurrence(s.C1, s.C2);
  });
}

[[noreturn]] void rethrow_first(std::size_t j, std::uint64_t seed, const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const DivergenceError& d) {
    throw DivergenceError("trajectory " + std::to_string(j) + " (seed " + std::to_string(seed) + "): " + d.what(),
                          d.step(), j, seed);
  }
}

template <bool Parallel>
EnsembleResult run(const EnsemblePoint& point, int workers) {
  point.validate();
  Work w{point, 0, record_indices(point.grid.n_steps, point.stride)};
  w.n_rec = w.indices.size();
  const std::size_t n = point.n_traj;
  const std::size_t B = std::min(kBatches, n);
  const std::size_t width = w.n_rec * kFields;

  std::vector<double> batch_sums(B * width, 0.0);
  std::vector<std::size_t> batch_count(B, 0);
  std::vector<double> buffer(std::min(kChunk, n) * width);
  std::vector<std::exception_ptr> errors(std::min(kChunk, n));

  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t len = std::min(kChunk, n - start);
    std::fill(errors.begin(), errors.end(), nullptr);
    auto body = [&](std::size_t i) {
      try {
        run_one(w, start + i, buffer.data() + i * width);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    };
    if constexpr (Parallel) {
      const long long m = static_cast<long long>(len);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
      for (long long i = 0; i < m; ++i) body(static_cast<std::size_t>(i));
    } else {
      for (std::size_t i = 0; i < len; ++i) body(i);
    }
    for (std::size_t i = 0; i < len; ++i)
      if (errors[i]) rethrow_first(start + i, point.master_seed, errors[i]);
    // Ascending-index reduction keeps the sums independent of scheduling.
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t j = start + i;
      const std::size_t b = j * B / n;
      const double* row = buffer.data() + i * width;
      double* acc = batch_sums.data() + b * width;
      for (std::size_t k = 0; k < width; ++k) acc[k] += row[k];
      ++batch_count[b];
    }
  }

  std::vector<double> total(width, 0.0);
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t k = 0; k < width; ++k) total[k] += batch_sums[b * width + k];

  EnsembleResult r;
  r.n_traj = n;
  r.n_batches = B;
  r.master_seed = point.master_seed;
  r.config_digest = sha256_hex(canonical_text(point));
  const double dn = static_cast<double>(n);
  for (std::size_t s = 0; s < w.n_rec; ++s) {
    const double* t = total.data() + s * kFields;
    RhoEntries e{t[0] / dn, t[1] / dn, t[2] / dn, t[3] / dn};
    const double c = concurrence_wootters(density_from_moments(e.p_eg, e.p_ge, {e.re_coherence, e.im_coherence}));
    double se = 0.0;
    if (B >= 2) {
      std::vector<double> cb(B);
      for (std::size_t b = 0; b < B; ++b) {
        const double* a = batch_sums.data() + b * width + s * kFields;
        const double nb = static_cast<double>(batch_count[b]);
        cb[b] = concurrence_wootters(density_from_moments(a[0] / nb, a[1] / nb, {a[2] / nb, a[3] / nb}));
      }
      double mean = 0.0;
      for (double x : cb) mean += x;
      mean /= static_cast<double>(B);
      double ss = 0.0;
      for (double x : cb) ss += (x - mean) * (x - mean);
      se = std::sqrt(ss / static_cast<double>(B - 1) / static_cast<double>(B));
    }
    r.concurrence.times.push_back(point.grid.time(w.indices[s]));
    r.concurrence.values.push_back(c);
    r.concurrence.std_error.push_back(se);
    r.rho.push_back(e);
    r.mean_norm.push_back(t[4] / dn);
    r.mean_pure_concurrence.push_back(t[5] / dn);
  }
  return r;
}

}  // namespace

void EnsemblePoint::validate() const {
  params.validate();
  mixnoise::validate(noise);
  grid.validate();
  if (n_traj < 1) throw ParameterError("ensemble: n_traj must be at least 1");
  if (stride < 1) throw ParameterError("ensemble: stride must be at least 1");
  if (!init.finite() || init.norm() > 1.0 + 1e-12) throw ParameterError("ensemble: init must be normalized");
}

std::pair<double, double> EnsembleResult::at(double t) const {
  const auto& ts = concurrence.times;
  if (ts.empty()) throw ParameterError("ensemble result: empty series");
  std::size_t best = 0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) < std::abs(ts[best] - t)) best = i;
  if (std::abs(ts[best] - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw ParameterError("ensemble result: time " + num(t) + " was not recorded");
  return {concurrence.values[best], concurrence.std_error[best]};
}

int available_workers() { return omp_get_max_threads(); }

EnsembleResult run_ensemble(const EnsemblePoint& point, int workers) {
  if (workers <= 0) workers = available_workers();
  return run<true>(point, workers);
}

EnsembleResult run_ensemble_serial(const EnsemblePoint& point) { return run<false>(point, 1); }

ConvergenceReport convergence_check(const EnsembleResult& r1, const EnsembleResult& r2, double tol) {
  const auto& t1 = r1.times();
  const auto& t2 = r2.times();
  if (t1.size() != t2.size()) throw ParameterError("convergence_check: recorded grids differ");
  ConvergenceReport rep;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    if (std::abs(t1[i] - t2[i]) > 1e-9 * std::max(1.0, std::abs(t1[i])))
      throw ParameterError("convergence_check: recorded grids differ");
    const double d = std::abs(r1.concurrence.values[i] - r2.concurrence.values[i]);
    if (i == 0 || d > rep.max_abs_diff) {
      rep.max_abs_diff = d;
      rep.worst_time = t1[i];
    }
  }
  rep.pass = rep.max_abs_diff < tol || rep.max_abs_diff == 0.0;
  return rep;
}

std::string canonical_text(const NoiseModel& model) {
  if (const auto* m = std::get_if<MixtureNoise>(&model)) {
    return "mixture p=" + num(m->p) + (m->shared ? " shared" : "") + " a={" + leaf_text(m->a) + "} b={" +
           leaf_text(m->b) + "}";
  }
  return std::visit(
      [](const auto& m) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, MixtureNoise>)
          return {};
        else
          return leaf_text(LeafNoise{m});
      },
      model);
}

std::string canonical_text(const EnsemblePoint& p) {
  std::ostringstream os;
  os << "system Gamma_Q=" << num(p.params.Gamma_Q) << " gamma_Q=" << num(p.params.gamma_Q) << " G01="
     << num(p.params.G0[0]) << " G02=" << num(p.params.G0[1]) << " kappa=" << num(p.params.kappa)
     << " x01=" << num(p.params.x0[0]) << " x02=" << num(p.params.x0[1])
     << " noise_scale=" << num(p.params.noise_scale) << "\n";
  os << "noise " << canonical_text(p.noise) << "\n";
  os << "grid t0=" << num(p.grid.t0) << " dt=" << num(p.grid.dt) << " n_steps=" << p.grid.n_steps
     << " stride=" << p.stride << "\n";
  os << "ensemble n_traj=" << p.n_traj << " seed=" << p.master_seed << "\n";
  const auto& s = p.init;
  os << "init";
  for (const cplx& c : {s.C1, s.C2, s.C3, s.C4, s.I}) os << " " << num(c.real()) << "," << num(c.imag());
  os << "\n";
  return os.str();
}

}  // namespace mixnoise
