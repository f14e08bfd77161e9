#pragma once

#include <vector>

#include "tangentlab/charts.hpp"

namespace tangentlab {

// Chart parameters below this floor make the tangent basis numerically
// degenerate.
inline constexpr double kWidthFloor = 1e-6;

// Analytic derivatives of the state builders with respect to the chart
// coordinates, sampled on the grid, in the same order as coords():
//   particle: d/da = ((x-a)/(2 sigma^2)) Psi,  d/dp = i x Psi
//   field:    d/dphi_i = h^2 [K (phi - phi_c)]_i Psi,  d/dpi_i = i h phi_i Psi
//   modes:    d/dA = kernel (q - A) Psi,  d/dPi = i q Psi
// The returned vectors are raw coordinate derivatives (no projective
// quotient); they match central finite differences of the builders.
std::vector<QuantumState> tangent_basis(const ParticleChart& c, const GridPtr& grid);
std::vector<QuantumState> tangent_basis(const FieldChart& c, const GridPtr& grid);
std::vector<QuantumState> tangent_basis(const ProductChart& c, const GridPtr& grid);
std::vector<QuantumState> tangent_basis(const EMModeChart& c, const GridPtr& grid);

// Quotient out the ray direction: T -> T - (<Psi|T>/<Psi|Psi>) Psi.
// Chart states are defined up to global phase, so flows are projected
// within this horizontal complement; for normalized chart families the
// subtracted component is purely the i*Psi phase direction.
std::vector<QuantumState> horizontal(const std::vector<QuantumState>& basis,
                                     const QuantumState& psi);

// Real Gram matrix G_jk = Re <T_j | T_k> of a set of states.
RMatrix gram(const std::vector<QuantumState>& basis);

// lambda_max / lambda_min of a symmetric PSD matrix (inf if singular).
double condition_number(const RMatrix& g);

template <typename ChartT>
struct Retraction {
  ChartT chart;
  double residual = 0.0;  // Fubini-Study distance between input and chart state
};

// Moment-matching retraction with the family's width data frozen:
// positions from diagonal expectations, momenta from the lattice phase
// autocorrelation (exact inverse of the sampled builders, free of the
// sin(k h)/h stencil bias).  Throws DomainError if a fitted center leaves
// the grid interior.
Retraction<ParticleChart> retract(const QuantumState& psi, const ParticleChart& family);
Retraction<FieldChart> retract(const QuantumState& psi, const FieldChart& family);
Retraction<ProductChart> retract(const QuantumState& psi, const ProductChart& family);
Retraction<EMModeChart> retract(const QuantumState& psi, const EMModeChart& family);

// Chart coordinates of the retraction without rebuilding the chart state.
RVector retract_coords(const QuantumState& psi, const ParticleChart& family);
RVector retract_coords(const QuantumState& psi, const FieldChart& family);
RVector retract_coords(const QuantumState& psi, const ProductChart& family);
RVector retract_coords(const QuantumState& psi, const EMModeChart& family);

// Builder dispatch shared by generic code.
inline QuantumState build_state(const ParticleChart& c, const GridPtr& g) { return particle_state(c, g); }
inline QuantumState build_state(const FieldChart& c, const GridPtr& g) { return field_state(c, g); }
inline QuantumState build_state(const ProductChart& c, const GridPtr& g) { return product_state(c, g); }
inline QuantumState build_state(const EMModeChart& c, const GridPtr& g) { return em_state(c, g); }

}  // namespace tangentlab
