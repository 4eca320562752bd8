#include "mixnoise/observables.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mixnoise/errors.hpp"

namespace mixnoise {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kNegativeTol = 1e-10;
// Eigenvalues below this are rounding residue of exact zeros.
constexpr double kRoundingZero = 1e-14;

Eigen::Matrix4cd spin_flip() {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy;
}

}  // namespace

DensityMatrix density_from_moments(double p_eg, double p_ge, std::complex<double> coherence) {
  DensityMatrix rho = DensityMatrix::Zero();
  rho(1, 1) = p_eg;
  rho(2, 2) = p_ge;
  rho(1, 2) = coherence;
  rho(2, 1) = std::conj(coherence);
  rho(3, 3) = 1.0 - p_eg - p_ge;
  return rho;
}

DensityMatrix reduced_density_matrix(
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& samples) {
  if (samples.empty()) throw ParameterError("reduced_density_matrix: empty sample set");
  double p1 = 0.0, p2 = 0.0;
  std::complex<double> c{};
  for (const auto& [c1, c2] : samples) {
    if (std::norm(c1) + std::norm(c2) > 1.0 + 1e-10)
      throw ParameterError("reduced_density_matrix: sample with |C1|^2+|C2|^2 > 1");
    p1 += std::norm(c1);
    p2 += std::norm(c2);
    c += c1 * std::conj(c2);
  }
  const double n = static_cast<double>(samples.size());
  return density_from_moments(p1 / n, p2 / n, c / n);
}

void validate_density(const DensityMatrix& rho) {
  if (!rho.allFinite()) throw ValidationError("density matrix: non-finite entries");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) throw ValidationError("density matrix: not Hermitian");
  const std::complex<double> tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol)
    throw ValidationError("density matrix: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kNegativeTol) throw ValidationError("density matrix: negative eigenvalue");
}

double concurrence_wootters(const DensityMatrix& rho) {
  validate_density(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()));
  Eigen::Vector4d lam = es.eigenvalues();
  for (int i = 0; i < 4; ++i)
    if (lam(i) < kRoundingZero) lam(i) = 0.0;
  lam /= lam.sum();
  // rho = W W^dagger, and the Wootters lambdas are the singular values of
  // W^T (sy x sy) W.
  Eigen::Matrix4cd W = es.eigenvectors() * lam.cwiseSqrt().cast<std::complex<double>>().asDiagonal();
  Eigen::Matrix4cd tau = W.transpose() * spin_flip() * W;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const Eigen::Vector4d s = svd.singularValues();
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double concurrence_xstate(const DensityMatrix& rho) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool allowed = (i == j) || (i == 1 && j == 2) || (i == 2 && j == 1);
      if (!allowed && std::abs(rho(i, j)) > 1e-12)
        throw ValidationError("concurrence_xstate: matrix lacks single-excitation X structure");
    }
  const double corner = std::max(0.0, rho(0, 0).real() * rho(3, 3).real());
  return 2.0 * std::max(0.0, std::abs(rho(1, 2)) - std::sqrt(corner));
}

}  // namespace mixnoise
