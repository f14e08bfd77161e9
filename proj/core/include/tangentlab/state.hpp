#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include "tangentlab/grid.hpp"

namespace tangentlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// A truncated wavefunction (or wave functional) sampled on a ConfigGrid.
// Immutable after construction; all "mutating" operations return new states.
class QuantumState {
 public:
  QuantumState(GridPtr grid, CVector amplitudes)
      : grid_(std::move(grid)), amp_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amp_.size()) != grid_->total_points())
      throw GridMismatchError("amplitude vector length does not match grid");
  }

  const ConfigGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const CVector& amplitudes() const { return amp_; }
  std::size_t size() const { return static_cast<std::size_t>(amp_.size()); }

  double norm_squared() const {
    if (!norm_sq_cache_) norm_sq_cache_ = amp_.squaredNorm() * grid_->measure();
    return *norm_sq_cache_;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  QuantumState normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize zero or non-finite state");
    QuantumState out(grid_, amp_ / n);
    out.norm_sq_cache_ = 1.0;
    return out;
  }

  QuantumState scaled(Complex c) const { return QuantumState(grid_, amp_ * c); }

  bool finite() const { return amp_.allFinite(); }

 private:
  GridPtr grid_;
  CVector amp_;
  mutable std::optional<double> norm_sq_cache_;
};

inline void require_same_grid(const QuantumState& a, const QuantumState& b) {
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_shape(b.grid()))
    throw GridMismatchError("states live on different grids");
}

// L2 inner product with the grid measure; conjugate-linear in the first
// argument, linear in the second.
inline Complex inner(const QuantumState& a, const QuantumState& b) {
  require_same_grid(a, b);
  return a.amplitudes().dot(b.amplitudes()) * a.grid().measure();
}

// Projective angle between rays: arccos(|<a|b>| / (|a| |b|)), in [0, pi/2].
// Invariant under rescaling of either state by a nonzero complex constant.
// Roundoff in the overlap puts a ~sqrt(eps) noise floor (about 5e-8) on
// distances near zero.
inline double fubini_study(const QuantumState& a, const QuantumState& b) {
  require_same_grid(a, b);
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw NumericalError("fubini_study of zero-norm state");
  double c = std::abs(inner(a, b)) / (na * nb);
  if (c > 1.0) c = 1.0;
  return std::acos(c);
}

// ---------------------------------------------------------------------------
// Elementary grid operators.  Momentum is -i times the 3-point central
// difference along an axis, with Dirichlet-zero values beyond the ends.
// ---------------------------------------------------------------------------

namespace detail {

// Visit the grid as rows along axis d: base index plus i * stride, i in [0, n).
template <typename F>
void for_each_line(const ConfigGrid& g, std::size_t d, F&& f) {
  const std::size_t s = g.stride(d);
  const std::size_t n = static_cast<std::size_t>(g.axis(d).n);
  const std::size_t block = n * s;
  const std::size_t outer = g.total_points() / block;
  for (std::size_t hi = 0; hi < outer; ++hi)
    for (std::size_t lo = 0; lo < s; ++lo) f(hi * block + lo, s, n);
}

}  // namespace detail

// out += coef * D2 psi along axis d (Dirichlet-zero boundaries).
inline void add_second_difference(const QuantumState& psi, std::size_t d, double coef,
                                  CVector& out) {
  const ConfigGrid& g = psi.grid();
  const CVector& a = psi.amplitudes();
  const double inv_h2 = 1.0 / (g.axis(d).spacing() * g.axis(d).spacing());
  detail::for_each_line(g, d, [&](std::size_t base, std::size_t s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = base + i * s;
      Complex acc = -2.0 * a[j];
      if (i > 0) acc += a[j - s];
      if (i + 1 < n) acc += a[j + s];
      out[j] += coef * inv_h2 * acc;
    }
  });
}

// out += coef * (-i d/dq) psi along axis d (central difference).
inline void add_momentum(const QuantumState& psi, std::size_t d, Complex coef, CVector& out) {
  const ConfigGrid& g = psi.grid();
  const CVector& a = psi.amplitudes();
  const Complex c = coef * Complex(0.0, -1.0) / (2.0 * g.axis(d).spacing());
  detail::for_each_line(g, d, [&](std::size_t base, std::size_t s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = base + i * s;
      Complex acc = 0.0;
      if (i + 1 < n) acc += a[j + s];
      if (i > 0) acc -= a[j - s];
      out[j] += c * acc;
    }
  });
}

// Real vector of coordinate values of axis d over the flattened grid.
inline RVector coordinate_field(const ConfigGrid& g, std::size_t d) {
  RVector v(static_cast<Eigen::Index>(g.total_points()));
  for (std::size_t j = 0; j < g.total_points(); ++j)
    v[static_cast<Eigen::Index>(j)] = g.coord(j, d);
  return v;
}

// <psi| q_d |psi> / <psi|psi>
inline double expect_position(const QuantumState& psi, std::size_t d) {
  const ConfigGrid& g = psi.grid();
  const CVector& a = psi.amplitudes();
  double acc = 0.0;
  for (std::size_t j = 0; j < g.total_points(); ++j)
    acc += std::norm(a[static_cast<Eigen::Index>(j)]) * g.coord(j, d);
  return acc * g.measure() / psi.norm_squared();
}

// Re <psi| (-i d/dq_d) |psi> / <psi|psi>
inline double expect_momentum(const QuantumState& psi, std::size_t d) {
  CVector tmp = CVector::Zero(static_cast<Eigen::Index>(psi.size()));
  add_momentum(psi, d, 1.0, tmp);
  const Complex v = psi.amplitudes().dot(tmp) * psi.grid().measure();
  return v.real() / psi.norm_squared();
}

// <psi| diag(f) |psi> / <psi|psi>
inline double expect_diagonal(const QuantumState& psi, const RVector& f) {
  const CVector& a = psi.amplitudes();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) acc += std::norm(a[j]) * f[j];
  return acc * psi.grid().measure() / psi.norm_squared();
}

// Transport-averaged phase increment per grid step along axis d:
// arg(sum_j conj(psi_j) psi_{j+1}) / spacing.  For a sampled plane-wave
// phase e^{i k q} this recovers k without the sin(k h)/h stencil bias of
// expect_momentum, so it is the estimator retraction uses.
inline double phase_gradient(const QuantumState& psi, std::size_t d) {
  const ConfigGrid& g = psi.grid();
  const CVector& a = psi.amplitudes();
  Complex acc = 0.0;
  detail::for_each_line(g, d, [&](std::size_t base, std::size_t s, std::size_t n) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t j = base + i * s;
      acc += std::conj(a[j]) * a[j + s];
    }
  });
  if (std::abs(acc) == 0.0) return 0.0;
  return std::arg(acc) / g.axis(d).spacing();
}

}  // namespace tangentlab
