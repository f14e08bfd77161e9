#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <string>

#include "tangentlab/hamiltonian.hpp"

namespace tangentlab {

using SparseC = Eigen::SparseMatrix<Complex>;

// Assemble the Hamiltonian as a sparse matrix with the diagonal sampled at
// time t.  Off-diagonal structure is time-independent.
inline SparseC hamiltonian_matrix(const HamiltonianSpec& h, double t = 0.0) {
  const ConfigGrid& g = h.grid();
  const std::size_t total = g.total_points();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(total * (1 + 2 * h.kinetic_terms().size() + 2 * h.momentum_couplings().size()));

  const RVector diag = h.diagonal_at(t);
  for (std::size_t j = 0; j < total; ++j)
    trip.emplace_back(static_cast<int>(j), static_cast<int>(j), Complex(diag[static_cast<Eigen::Index>(j)], 0.0));

  for (const auto& k : h.kinetic_terms()) {
    const double inv_h2 = 1.0 / (g.axis(k.axis).spacing() * g.axis(k.axis).spacing());
    const double c = -k.coefficient * inv_h2;
    detail::for_each_line(g, k.axis, [&](std::size_t base, std::size_t s, std::size_t n) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = base + i * s;
        trip.emplace_back(static_cast<int>(j), static_cast<int>(j), Complex(-2.0 * c, 0.0));
        if (i > 0) trip.emplace_back(static_cast<int>(j), static_cast<int>(j - s), Complex(c, 0.0));
        if (i + 1 < n) trip.emplace_back(static_cast<int>(j), static_cast<int>(j + s), Complex(c, 0.0));
      }
    });
  }

  for (const auto& mc : h.momentum_couplings()) {
    const double inv2h = 1.0 / (2.0 * g.axis(mc.axis).spacing());
    detail::for_each_line(g, mc.axis, [&](std::size_t base, std::size_t s, std::size_t n) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = base + i * s;
        const double cj = mc.coefficient[static_cast<Eigen::Index>(j)];
        // (1/2)(c p + p c): row j couples to j +/- s with weight
        // -i/(2h) * (c_j + c_{j +/- s}) / 2
        if (i + 1 < n) {
          const double ck = mc.coefficient[static_cast<Eigen::Index>(j + s)];
          trip.emplace_back(static_cast<int>(j), static_cast<int>(j + s),
                            Complex(0.0, -inv2h * 0.5 * (cj + ck)));
        }
        if (i > 0) {
          const double ck = mc.coefficient[static_cast<Eigen::Index>(j - s)];
          trip.emplace_back(static_cast<int>(j), static_cast<int>(j - s),
                            Complex(0.0, inv2h * 0.5 * (cj + ck)));
        }
      }
    });
  }

  SparseC m(static_cast<int>(total), static_cast<int>(total));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

// Norm-preserving implicit-midpoint (Crank-Nicolson) propagator:
//   (I + i dt/2 H(t_mid)) psi_{n+1} = (I - i dt/2 H(t_mid)) psi_n
// For a time-independent Hamiltonian the factorization is reused across
// steps.  Linear solves are direct; the residual of every solve is checked
// against the contract.
class CrankNicolson {
 public:
  CrankNicolson(const HamiltonianSpec& h, double dt)
      : h_(&h),
        dt_(dt),
        identity_(static_cast<int>(h.grid().total_points()),
                  static_cast<int>(h.grid().total_points())) {
    identity_.setIdentity();
    if (!h.time_dependent()) factorize(0.0);
  }

  QuantumState step(const QuantumState& psi, double t, int step_index = 0) {
    if (h_->time_dependent()) factorize(t + 0.5 * dt_);
    const CVector rhs = rhs_mat_ * psi.amplitudes();
    CVector next = lu_.solve(rhs);
    const double resid = (lhs_mat_ * next - rhs).norm();
    if (!(resid <= kResidualTol * std::max(1.0, rhs.norm())) || !next.allFinite())
      throw NumericalError("Crank-Nicolson solve failed at step " + std::to_string(step_index) +
                           " (residual " + std::to_string(resid) + ")");
    return QuantumState(psi.grid_ptr(), std::move(next));
  }

  static constexpr double kResidualTol = 1e-10;

 private:
  void factorize(double t_mid) {
    const SparseC hm = hamiltonian_matrix(*h_, t_mid);
    const Complex idt2(0.0, 0.5 * dt_);
    lhs_mat_ = identity_ + idt2 * hm;
    rhs_mat_ = identity_ - idt2 * hm;
    lhs_mat_.makeCompressed();
    lu_.compute(lhs_mat_);
    if (lu_.info() != Eigen::Success) throw NumericalError("Crank-Nicolson factorization failed");
  }

  const HamiltonianSpec* h_;
  double dt_;
  SparseC identity_;
  SparseC lhs_mat_, rhs_mat_;
  Eigen::SparseLU<SparseC> lu_;
};

// evolve psi0 by `steps` Crank-Nicolson steps of size dt starting at t0.
inline QuantumState evolve(const QuantumState& psi0, const HamiltonianSpec& h, double dt,
                           int steps, double t0 = 0.0) {
  CrankNicolson cn(h, dt);
  QuantumState psi = psi0;
  for (int s = 0; s < steps; ++s) psi = cn.step(psi, t0 + s * dt, s);
  return psi;
}

// Exact propagator for a time-independent Hamiltonian via dense
// eigendecomposition; practical for grids up to a few thousand points.
// Unitary to roundoff, so long random-walk runs accumulate no norm drift.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const HamiltonianSpec& h) : grid_(h.grid_ptr()) {
    if (h.time_dependent())
      throw ConfigError("SpectralPropagator requires a time-independent Hamiltonian");
    Eigen::MatrixXcd dense(hamiltonian_matrix(h, 0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw NumericalError("Hamiltonian eigendecomposition failed");
    vectors_ = es.eigenvectors();
    values_ = es.eigenvalues();
  }

  QuantumState advance(const QuantumState& psi, double dt) const {
    CVector coeff = vectors_.adjoint() * psi.amplitudes();
    for (Eigen::Index k = 0; k < coeff.size(); ++k)
      coeff[k] *= std::exp(Complex(0.0, -values_[k] * dt));
    return QuantumState(grid_, vectors_ * coeff);
  }

  const RVector& eigenvalues() const { return values_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

  // Matrix whose columns are the `count` lowest-energy eigenvectors.
  Eigen::MatrixXcd low_energy_basis(int count) const {
    return vectors_.leftCols(count);
  }

 private:
  GridPtr grid_;
  Eigen::MatrixXcd vectors_;
  RVector values_;
};

}  // namespace tangentlab
