#pragma once

#include <cmath>

#include "tangentlab/charts.hpp"
#include "tangentlab/hamiltonian.hpp"

namespace tangentlab {

// Time profile s(t) multiplying a static source shape J0(x):
// J(x, t) = J0(x) * s(t).
struct SourceProfile {
  enum class Kind { constant, sine, pulse };
  Kind kind = Kind::constant;
  double omega = 1.0;  // sine frequency
  double t0 = 0.0;     // pulse center
  double tau = 1.0;    // pulse width

  double operator()(double t) const {
    switch (kind) {
      case Kind::sine:
        return std::sin(omega * t);
      case Kind::pulse: {
        const double u = (t - t0) / tau;
        return std::exp(-0.5 * u * u);
      }
      case Kind::constant:
      default:
        return 1.0;
    }
  }
};

// Scalar source term attached to the field sites.
struct FieldSource {
  RVector amplitude;  // J0 per site; empty means no source
  SourceProfile profile;
  bool time_dependent = false;  // false: J(x,t) = J0(x) constant in t
  bool empty() const { return amplitude.size() == 0; }
};

// p^2/(2M) + V(x) on a rank-1 grid.
HamiltonianSpec particle_hamiltonian(const GridPtr& grid, double mass, const Polynomial& v);

// Lattice scalar field on axes [offset, offset + sites):
//   H = sum_i h [ pi_i^2 / 2 + ((grad phi)_i)^2 / 2 + m^2 phi_i^2 / 2 - J_i(t) phi_i ]
// with pi_i = -(i/h) d/dphi_i, so the kinetic coefficient per axis is 1/(2h).
// `quartic` adds an optional (lambda/4) h sum_i phi_i^4 self term, used by
// width-scaling diagnostics.
HamiltonianSpec field_hamiltonian(const GridPtr& grid, const FieldChart& medium,
                                  const FieldSource& source = {}, double quartic = 0.0,
                                  std::size_t axis_offset = 0);

// Particle + lattice field + smeared interaction on a rank-(1+N) grid:
//   H_int = -g sum_i rho_sigma(x_i - x) phi_i h
// where rho_sigma is the particle-width Gaussian kernel.
HamiltonianSpec coupled_hamiltonian(const GridPtr& grid, const ProductChart& family,
                                    const Polynomial& v, const FieldSource& source = {});

// Charged particle + transverse modes (dipole coupling):
//   H = (p - q sum_k u_k A_k)^2 / (2M) + U(x) + sum_k (Pi_k^2 + k^2 A_k^2)/2
// with U = q Phi_ext.  The cross term is carried by a symmetrized momentum
// coupling; its coefficient depends only on the mode axes.
HamiltonianSpec em_hamiltonian(const GridPtr& grid, const EMModeChart& family);

// Diagonal of the lattice-field potential energy (gradient + mass + quartic),
// exposed for reuse by tests.
RVector field_potential_diagonal(const ConfigGrid& grid, const FieldChart& medium,
                                 double quartic, std::size_t axis_offset);

}  // namespace tangentlab
