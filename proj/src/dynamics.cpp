#include "mixnoise/dynamics.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace mixnoise {

void SystemParams::validate() const {
  if (!(Gamma_Q >= 0.0)) throw ParameterError("system: Gamma_Q must be non-negative");
  if (!(gamma_Q > 0.0)) throw ParameterError("system: gamma_Q must be positive");
  for (double g : G0)
    if (!(g >= 0.0)) throw ParameterError("system: G0 must be non-negative");
  if (!std::isfinite(kappa) || !std::isfinite(noise_scale) || !std::isfinite(x0[0]) || !std::isfinite(x0[1]))
    throw ParameterError("system: kappa, x0 and noise_scale must be finite");
}

bool AmplitudeState::finite() const {
  for (const cplx& c : {C1, C2, C3, C4, I})
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

AmplitudeState AmplitudeState::bell() {
  const double h = 1.0 / std::sqrt(2.0);
  AmplitudeState s;
  s.C1 = h;
  s.C2 = h;
  return s;
}

double coupling_at(const SystemParams& params, double xi, int atom_index) {
  if (atom_index != 1 && atom_index != 2) throw ParameterError("coupling_at: atom_index must be 1 or 2");
  const std::size_t i = static_cast<std::size_t>(atom_index - 1);
  return params.G0[i] * std::sin(params.kappa * (params.x0[i] + params.noise_scale * xi));
}

std::vector<std::size_t> record_indices(std::size_t n_steps, std::size_t stride) {
  if (stride == 0) throw ParameterError("record_indices: stride must be positive");
  std::vector<std::size_t> idx;
  for (std::size_t n = 0; n < n_steps; n += stride) idx.push_back(n);
  if (idx.back() != n_steps - 1) idx.push_back(n_steps - 1);
  return idx;
}

TrajectoryRecord run_trajectory(const SystemParams& params, const SampledPath& path, const AmplitudeState& init,
                                std::size_t stride) {
  params.validate();
  path.grid.validate();
  if (!init.finite() || init.norm() > 1.0 + 1e-12) throw ParameterError("run_trajectory: init must be normalized");
  TrajectoryRecord rec;
  rec.grid = path.grid;
  rec.stride = stride;
  rec.indices = record_indices(path.grid.n_steps, stride);
  rec.states.resize(rec.indices.size());
  integrate(params, path.values, path.grid, init, stride,
            [&](std::size_t slot, const AmplitudeState& s) { rec.states[slot] = s; });
  return rec;
}

AmplitudeState analytic_constant_G(const SystemParams& params, double t, const AmplitudeState& init) {
  params.validate();
  if (t == 0.0) return init;
  const double G1 = params.G0[0] * std::sin(params.kappa * params.x0[0]);
  const double G2 = params.G0[1] * std::sin(params.kappa * params.x0[1]);
  const cplx mi(0.0, -1.0);
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M(0, 2) = mi * G1;
  M(1, 2) = mi * G2;
  M(2, 0) = mi * G1;
  M(2, 1) = mi * G2;
  M(2, 3) = -1.0;
  M(3, 2) = 0.5 * params.Gamma_Q * params.gamma_Q;
  M(3, 3) = -params.gamma_Q;
  Eigen::Vector4cd x0(init.C1, init.C2, init.C3, init.I);

  Eigen::Vector4cd x;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(M);
  const Eigen::Matrix4cd& V = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(V);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(3);
  if (es.info() == Eigen::Success && std::isfinite(cond) && cond < 1e3) {
    Eigen::Vector4cd coeff = V.partialPivLu().solve(x0);
    for (int i = 0; i < 4; ++i) coeff(i) *= std::exp(es.eigenvalues()(i) * t);
    x = V * coeff;
  } else {
    // Nearly defective: scaling-and-squaring Pade exponential.
    Eigen::Matrix4cd E = (M * t).exp();
    x = E * x0;
  }
  AmplitudeState out;
  out.C1 = x(0);
  out.C2 = x(1);
  out.C3 = x(2);
  out.C4 = init.C4;
  out.I = x(3);
  return out;
}

}  // namespace mixnoise
