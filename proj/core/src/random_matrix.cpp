#include "tangentlab/random_matrix.hpp"

#include <cmath>

namespace tangentlab {

Eigen::MatrixXcd sample_gue(int n, double v, Rng& rng) {
  if (n < 2) throw ConfigError("sample_gue: dimension must be >= 2");
  Eigen::MatrixXcd h(n, n);
  const double off_scale = v / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    h(i, i) = Complex(v * rng.normal(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const Complex z(off_scale * rng.normal(), off_scale * rng.normal());
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

Eigen::MatrixXcd unitary_of(const Eigen::MatrixXcd& h, double angle) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("kick eigendecomposition failed");
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases[k] = std::exp(Complex(0.0, -angle * es.eigenvalues()[k]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

QuantumState kick(const QuantumState& psi, const Eigen::MatrixXcd& h_rand, double lambda,
                  double tau) {
  if (h_rand.rows() != static_cast<Eigen::Index>(psi.size()))
    throw GridMismatchError("kick: random matrix dimension does not match state");
  if (lambda == 0.0) return psi;
  const Eigen::MatrixXcd u = unitary_of(h_rand, lambda * tau);
  return QuantumState(psi.grid_ptr(), u * psi.amplitudes());
}

QuantumState kick_in_subspace(const QuantumState& psi, const Eigen::MatrixXcd& basis,
                              const Eigen::MatrixXcd& h_rand, double lambda, double tau) {
  if (basis.rows() != static_cast<Eigen::Index>(psi.size()))
    throw GridMismatchError("kick_in_subspace: basis row count does not match state");
  if (h_rand.rows() != basis.cols())
    throw GridMismatchError("kick_in_subspace: random matrix does not match subspace");
  if (lambda == 0.0) return psi;
  const CVector y = basis.adjoint() * psi.amplitudes();
  const Eigen::MatrixXcd u = unitary_of(h_rand, lambda * tau);
  const CVector dy = u * y - y;
  return QuantumState(psi.grid_ptr(), psi.amplitudes() + basis * dy);
}

}  // namespace tangentlab
