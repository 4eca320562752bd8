#pragma once

#include <Eigen/Core>
#include <complex>
#include <utility>
#include <vector>

namespace mixnoise {

// Basis order {ee, eg, ge, gg}.
using DensityMatrix = Eigen::Matrix4cd;

struct ConcurrenceSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> std_error;
};

// Single-excitation average: rho_eg,eg = M|C1|^2, rho_ge,ge = M|C2|^2,
// rho_eg,ge = M[C1 conj(C2)], rho_gg = the remainder.
DensityMatrix reduced_density_matrix(const std::vector<std::pair<std::complex<double>, std::complex<double>>>& samples);
DensityMatrix density_from_moments(double p_eg, double p_ge, std::complex<double> coherence);

// Throws ValidationError on broken Hermiticity, trace or positivity.
void validate_density(const DensityMatrix& rho);

double concurrence_wootters(const DensityMatrix& rho);
double concurrence_xstate(const DensityMatrix& rho);

// 2|C1||C2|: concurrence of one trajectory's atomic state.
inline double pure_concurrence(std::complex<double> c1, std::complex<double> c2) {
  return 2.0 * std::abs(c1) * std::abs(c2);
}

}  // namespace mixnoise
