#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tangentlab/polynomial.hpp"
#include "tangentlab/state.hpp"

namespace tangentlab {

using RMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Chart types: the classical coordinates labelling points of the localized-
// state families.  Width parameters (sigma, K, mode kernels) are frozen
// family data, not dynamical coordinates.
// ---------------------------------------------------------------------------

// Gaussian particle packet psi(x) ~ exp(-(x-a)^2/(4 sigma^2) + i p x).
// Width convention: <(x-a)^2> = sigma^2 on the density |psi|^2.
struct ParticleChart {
  double a = 0.0;
  double p = 0.0;
  double sigma = 0.5;
  double mass = 1.0;
};

enum class LatticeBoundary { periodic, fixed };

// Gaussian functional over an N-site scalar field lattice:
//   Psi[phi] ~ exp(-1/2 h^2 (phi-phi_c)^T K (phi-phi_c) + i h pi_c . phi)
// Site sums carry weight h so lattice expressions track their continuum
// integrals; conjugation convention [phi_i, pi_j] = (i/h) delta_ij.
struct FieldChart {
  RVector phi_c;       // length N
  RVector pi_c;        // length N
  RMatrix kernel;      // N x N symmetric positive definite
  double h = 1.0;      // lattice spacing
  double m = 1.0;      // field mass
  LatticeBoundary boundary = LatticeBoundary::periodic;
  double x0 = 0.0;     // position of site 0 (sites at x0 + i h)

  int sites() const { return static_cast<int>(phi_c.size()); }
  double site_position(int i) const { return x0 + h * static_cast<double>(i); }
  static double centered_origin(int n, double h) { return -0.5 * h * static_cast<double>(n - 1); }
};

// Product of a particle chart and a field chart with a smeared coupling of
// strength g (the interaction samples the field against the particle's
// spatial density of width sigma).
struct ProductChart {
  ParticleChart particle;
  FieldChart field;
  double g = 0.0;
};

// One transverse radiation mode: harmonic degree of freedom with frequency
// k, coupled to the particle with constant amplitude u (dipole form).
struct EMMode {
  double k = 1.0;
  double A = 0.0;
  double Pi = 0.0;
  double u = 1.0;       // coupling profile value at the particle
  double kernel = 0.0;  // localization width parameter; 0 means use k
  double width() const { return kernel > 0.0 ? kernel : k; }
};

// Charged particle plus finitely many transverse modes in Coulomb gauge.
// `potential` is the external electrostatic energy q * Phi_ext(x).
struct EMModeChart {
  double a = 0.0;
  double p = 0.0;
  double sigma = 0.5;
  double mass = 1.0;
  double q = 0.0;
  std::vector<EMMode> modes;
  Polynomial potential;  // q * Phi_ext
};

// ---------------------------------------------------------------------------
// Chart coordinates: flattening order is particle (a, p) first, then field
// coordinates phi_0..phi_{N-1}, pi_0..pi_{N-1} (or A_0.., Pi_0.. for modes).
// ---------------------------------------------------------------------------

RVector coords(const ParticleChart& c);
RVector coords(const FieldChart& c);
RVector coords(const ProductChart& c);
RVector coords(const EMModeChart& c);

ParticleChart with_coords(const ParticleChart& ref, const RVector& y);
FieldChart with_coords(const FieldChart& ref, const RVector& y);
ProductChart with_coords(const ProductChart& ref, const RVector& y);
EMModeChart with_coords(const EMModeChart& ref, const RVector& y);

std::vector<std::string> coord_names(const ParticleChart& c);
std::vector<std::string> coord_names(const FieldChart& c);
std::vector<std::string> coord_names(const ProductChart& c);
std::vector<std::string> coord_names(const EMModeChart& c);

// ---------------------------------------------------------------------------
// State builders.  Every builder returns a grid-normalized state and throws
// DomainError if the Gaussian tails are clipped by the grid (relative
// boundary amplitude above 1e-8).
// ---------------------------------------------------------------------------

inline constexpr double kTailTolerance = 1e-8;

// Normalized spatial density |psi_{a,p}|^2 of the particle packet, sampled
// at the given points: exp(-(x-a)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)).
RVector rho_sigma(double a, double sigma, const GridAxis& axis);
double rho_sigma_at(double a, double sigma, double x);
// d/da of rho_sigma_at.
double rho_sigma_da(double a, double sigma, double x);

QuantumState particle_state(const ParticleChart& c, const GridPtr& grid);
QuantumState field_state(const FieldChart& c, const GridPtr& grid);
QuantumState product_state(const ProductChart& c, const GridPtr& grid);
QuantumState em_state(const EMModeChart& c, const GridPtr& grid);

// Default grids sized so tails fit with margin: the particle axis covers
// a +/- (8 sigma + margin), each field axis covers phi_c +/- span/sqrt(K_ii).
GridPtr particle_grid(const ParticleChart& c, int n, double margin = 0.0);
GridPtr field_grid(const FieldChart& c, int n_per_axis, double span = 6.5);
GridPtr product_grid(const ProductChart& c, int n_particle, int n_field, double margin = 0.0,
                     double span = 6.5);
GridPtr em_grid(const EMModeChart& c, int n_particle, int n_mode, double margin = 0.0,
                double span = 6.5);

}  // namespace tangentlab
