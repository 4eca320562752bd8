#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "mixnoise/errors.hpp"
#include "mixnoise/grid.hpp"

namespace mixnoise {

using cplx = std::complex<double>;

// Units: omega = Omega = 1.
struct SystemParams {
  double Gamma_Q = 1.0;
  double gamma_Q = 1.0;
  std::array<double, 2> G0{1.0, 1.0};
  double kappa = 1.0;
  std::array<double, 2> x0{std::numbers::pi / 2, std::numbers::pi / 2};
  double noise_scale = 1.0;

  void validate() const;
};

struct AmplitudeState {
  cplx C1{}, C2{}, C3{}, C4{}, I{};

  double norm() const { return std::norm(C1) + std::norm(C2) + std::norm(C3) + std::norm(C4); }
  bool finite() const;

  static AmplitudeState bell();

  AmplitudeState& operator+=(const AmplitudeState& o) {
    C1 += o.C1; C2 += o.C2; C3 += o.C3; C4 += o.C4; I += o.I;
    return *this;
  }
  friend AmplitudeState operator+(AmplitudeState a, const AmplitudeState& b) { return a += b; }
  friend AmplitudeState operator*(double s, AmplitudeState a) {
    a.C1 *= s; a.C2 *= s; a.C3 *= s; a.C4 *= s; a.I *= s;
    return a;
  }
  friend AmplitudeState operator*(cplx s, AmplitudeState a) {
    a.C1 *= s; a.C2 *= s; a.C3 *= s; a.C4 *= s; a.I *= s;
    return a;
  }
};

struct TrajectoryRecord {
  TimeGrid grid;
  std::size_t stride = 1;
  std::vector<std::size_t> indices;  // grid indices of the recorded states
  std::vector<AmplitudeState> states;
};

double coupling_at(const SystemParams& params, double xi, int atom_index);

inline AmplitudeState rhs(const AmplitudeState& s, double G1, double G2, const SystemParams& params) {
  // -i*g*c == (g*Im c, -g*Re c)
  auto mi = [](double g, cplx c) { return cplx(g * c.imag(), -g * c.real()); };
  AmplitudeState d;
  d.C1 = mi(G1, s.C3);
  d.C2 = mi(G2, s.C3);
  d.C3 = mi(G1, s.C1) + mi(G2, s.C2) - s.I;
  d.C4 = cplx{};
  d.I = -params.gamma_Q * s.I + (0.5 * params.Gamma_Q * params.gamma_Q) * s.C3;
  return d;
}

inline AmplitudeState step_rk4(const AmplitudeState& s, double dt, double G1, double G2, const SystemParams& params) {
  const AmplitudeState k1 = rhs(s, G1, G2, params);
  const AmplitudeState k2 = rhs(s + (0.5 * dt) * k1, G1, G2, params);
  const AmplitudeState k3 = rhs(s + (0.5 * dt) * k2, G1, G2, params);
  const AmplitudeState k4 = rhs(s + dt * k3, G1, G2, params);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Grid indices recorded for a given stride: 0, stride, 2*stride, ... and
// always the last point.
std::vector<std::size_t> record_indices(std::size_t n_steps, std::size_t stride);

// Integrates over the whole grid with sample-and-hold couplings (xi[n] drives
// step n -> n+1) and calls visit(slot, state) at each recorded index.
template <class Visit>
void integrate(const SystemParams& params, const std::vector<double>& xi, const TimeGrid& grid,
               const AmplitudeState& init, std::size_t stride, Visit&& visit) {
  if (xi.size() != grid.n_steps) throw IncompatiblePathError("integrate: path length differs from grid");
  if (stride == 0) throw ParameterError("integrate: stride must be positive");
  const double k = params.kappa;
  const double s = params.noise_scale;
  AmplitudeState state = init;
  std::size_t slot = 0;
  visit(slot++, state);
  const std::size_t last = grid.n_steps - 1;
  for (std::size_t n = 0; n < last; ++n) {
    const double G1 = params.G0[0] * std::sin(k * (params.x0[0] + s * xi[n]));
    const double G2 = params.G0[1] * std::sin(k * (params.x0[1] + s * xi[n]));
    state = step_rk4(state, grid.dt, G1, G2, params);
    if (!std::isfinite(state.C1.real() + state.C1.imag() + state.C2.real() + state.C2.imag() + state.C3.real() +
                       state.C3.imag() + state.I.real() + state.I.imag()))
      throw DivergenceError("integrate: non-finite amplitudes after step " + std::to_string(n), n);
    if ((n + 1) % stride == 0 || n + 1 == last) visit(slot++, state);
  }
}

TrajectoryRecord run_trajectory(const SystemParams& params, const SampledPath& path, const AmplitudeState& init,
                                std::size_t stride);

// Exact propagation of the linear system with xi == 0.
AmplitudeState analytic_constant_G(const SystemParams& params, double t, const AmplitudeState& init);

}  // namespace mixnoise
