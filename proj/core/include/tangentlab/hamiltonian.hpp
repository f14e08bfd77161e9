#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tangentlab/state.hpp"

namespace tangentlab {

// -coefficient * d^2/dq^2 along one axis.
struct KineticTerm {
  std::size_t axis = 0;
  double coefficient = 0.5;
};

// Symmetrized momentum coupling (1/2) (c p_axis + p_axis c) with a real
// diagonal coefficient field c and p = -i d/dq.  Used for minimal-coupling
// cross terms where c depends only on other axes (then the symmetrization
// is exact and the product form is recovered).
struct MomentumCoupling {
  std::size_t axis = 0;
  RVector coefficient;  // sampled over the grid
};

// A Hermitian grid Hamiltonian: second-difference kinetic terms along axes,
// an optional set of momentum couplings, a static real diagonal potential,
// and an optional time-dependent diagonal (the source term J(x,t) lives
// there).  With Dirichlet-zero boundaries every piece is Hermitian on the
// grid by construction.
class HamiltonianSpec {
 public:
  using TimePotential = std::function<RVector(double)>;

  explicit HamiltonianSpec(GridPtr grid) : grid_(std::move(grid)) {
    potential_ = RVector::Zero(static_cast<Eigen::Index>(grid_->total_points()));
  }

  HamiltonianSpec& add_kinetic(std::size_t axis, double coefficient) {
    kinetic_.push_back({axis, coefficient});
    return *this;
  }
  HamiltonianSpec& add_potential(const RVector& v) {
    potential_ += v;
    return *this;
  }
  HamiltonianSpec& add_momentum_coupling(std::size_t axis, RVector coefficient) {
    couplings_.push_back({axis, std::move(coefficient)});
    return *this;
  }
  HamiltonianSpec& set_time_potential(TimePotential f) {
    time_potential_ = std::move(f);
    return *this;
  }

  const GridPtr& grid_ptr() const { return grid_; }
  const ConfigGrid& grid() const { return *grid_; }
  const std::vector<KineticTerm>& kinetic_terms() const { return kinetic_; }
  const std::vector<MomentumCoupling>& momentum_couplings() const { return couplings_; }
  const RVector& static_potential() const { return potential_; }
  bool time_dependent() const { return static_cast<bool>(time_potential_); }

  RVector diagonal_at(double t) const {
    if (!time_potential_) return potential_;
    return potential_ + time_potential_(t);
  }

 private:
  GridPtr grid_;
  std::vector<KineticTerm> kinetic_;
  std::vector<MomentumCoupling> couplings_;
  RVector potential_;
  TimePotential time_potential_;
};

// H psi at time t.
inline QuantumState apply_hamiltonian(const HamiltonianSpec& h, const QuantumState& psi,
                                      double t = 0.0) {
  if (psi.grid_ptr() != h.grid_ptr() && !psi.grid().same_shape(h.grid()))
    throw GridMismatchError("state grid does not match Hamiltonian grid");
  if (!psi.finite()) throw NumericalError("apply_hamiltonian: non-finite amplitudes");

  const CVector& a = psi.amplitudes();
  CVector out = CVector::Zero(a.size());

  for (const auto& k : h.kinetic_terms()) add_second_difference(psi, k.axis, -k.coefficient, out);

  for (const auto& mc : h.momentum_couplings()) {
    // (1/2)(c p + p c) psi = (1/2)[ c (p psi) + p (c psi) ]
    CVector t1 = CVector::Zero(a.size());
    add_momentum(psi, mc.axis, 1.0, t1);
    t1.array() *= mc.coefficient.array();
    QuantumState cpsi(psi.grid_ptr(), a.cwiseProduct(mc.coefficient.cast<Complex>()));
    CVector t2 = CVector::Zero(a.size());
    add_momentum(cpsi, mc.axis, 1.0, t2);
    out += 0.5 * (t1 + t2);
  }

  if (h.time_dependent()) {
    const RVector v = h.diagonal_at(t);
    out.array() += a.array() * v.array().cast<Complex>();
  } else {
    out.array() += a.array() * h.static_potential().array().cast<Complex>();
  }

  return QuantumState(psi.grid_ptr(), std::move(out));
}

// <psi|H|psi> / <psi|psi>
inline double expect_energy(const HamiltonianSpec& h, const QuantumState& psi, double t = 0.0) {
  const QuantumState hp = apply_hamiltonian(h, psi, t);
  return (inner(psi, hp) / psi.norm_squared()).real();
}

}  // namespace tangentlab
