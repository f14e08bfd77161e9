#pragma once

#include <cmath>
#include <functional>

#include "tangentlab/charts.hpp"
#include "tangentlab/polynomial.hpp"
#include "tangentlab/systems.hpp"
#include "tangentlab/trajectory.hpp"

namespace tangentlab {

// State of the classical integrators; unused sectors stay empty.
struct ClassicalState {
  double t = 0.0;
  double a = 0.0;
  double p = 0.0;
  RVector phi;  // field amplitudes (or mode A_k)
  RVector pi;   // field momenta (or mode Pi_k)
};

// ------------------------------------------------------------------ lattice --

struct KGParams {
  int sites = 1;
  double h = 1.0;
  double m = 1.0;
  LatticeBoundary boundary = LatticeBoundary::periodic;
  double x0 = 0.0;  // site 0 position
  // Source J(site, t); empty shape means no source.
  RVector source_amplitude;
  SourceProfile source_profile;
  bool source_time_dependent = false;

  double site_position(int i) const { return x0 + h * static_cast<double>(i); }
  RVector source_at(double t) const {
    if (source_amplitude.size() == 0) return RVector::Zero(sites);
    return source_amplitude * (source_time_dependent ? source_profile(t) : 1.0);
  }
  void check_cfl(double dt) const {
    const double ad = std::abs(dt);
    if (!(ad < h) || !(ad * m < 0.5))
      throw ConfigError("kg_step: CFL violated (need |dt| < h and |dt|*m < 0.5)");
  }
};

// Lattice Laplacian (phi_{i+1} - 2 phi_i + phi_{i-1}) / h^2 with the chosen
// boundary (ghost sites zero for `fixed`).
RVector lattice_laplacian(const RVector& phi, double h, LatticeBoundary boundary);

// Leapfrog (kick-drift-kick) step of phi'' = lap phi - m^2 phi + J(t).
ClassicalState kg_step(const ClassicalState& s, const KGParams& params, double dt);

// Discrete field energy h sum_i [pi^2/2 + (grad phi)^2/2 + m^2 phi^2/2 - J phi].
double kg_energy(const ClassicalState& s, const KGParams& params);

// --------------------------------------------------------------- smearing --

// -sum_i (d/da rho_sigma(x_i - a)) phi_i h: the gradient of the smeared
// field sampled by a localized density of width sigma; tends to -phi'(a)
// as sigma -> 0.
double smeared_force(double a, double sigma, const RVector& phi, double h, double x0 = 0.0);

// ----------------------------------------------------------------- newton --

struct NewtonParams {
  double mass = 1.0;
  Polynomial v;          // external potential
  double v_smear = 0.0;  // Gaussian coarse-graining width for the force (0 = bare)

  Polynomial effective_potential() const {
    return v_smear > 0.0 ? v.gaussian_smeared(v_smear) : v;
  }
};

ClassicalState newton_step(const ClassicalState& s, const NewtonParams& params, double dt);
double newton_energy(const ClassicalState& s, const NewtonParams& params);

// ---------------------------------------------------------------- coupled --

// Coupled particle-field system with smeared coupling:
//   a' = p/M
//   p' = -V_eff'(a) + g * d/da [ sum_i rho_s(x_i - a) phi_i h ]
//   phi'' = lap phi - m^2 phi + g rho_s(x_i - a)
// derived from H = p^2/2M + V_eff(a) + H_field - g sum_i rho_s(x_i - a) phi_i h,
// so the particle force is -g * smeared_force(..).  `coupling_smear` is the
// width s of the sampling kernel (the tangent-projected quantum model
// induces s = sqrt(2) * sigma for a particle of width sigma).
struct CoupledParams {
  NewtonParams particle;
  KGParams field;
  double g = 0.0;
  double coupling_smear = 0.3;
  // Default: analytic d/da of the sampling kernel (matches the projected
  // quantum model).  When set, the particle force uses the lattice central
  // difference of the sampled density instead, which makes the discrete
  // translation charge p - h sum pi grad(phi) conserved exactly; the two
  // differ at O(h^2 rho''').
  bool lattice_consistent_force = false;

  void check_cfl(double dt) const { field.check_cfl(dt); }
};

ClassicalState coupled_step(const ClassicalState& s, const CoupledParams& params, double dt);
double coupled_energy(const ClassicalState& s, const CoupledParams& params);

// Total lattice momentum p + h sum_i pi_i (central difference grad phi)_i,
// the conserved charge of the periodic translation-invariant system.
double coupled_total_momentum(const ClassicalState& s, const CoupledParams& params);

// --------------------------------------------------------------- EM modes --

struct EMParams {
  double mass = 1.0;
  double q = 0.0;
  Polynomial potential;  // q * Phi_ext
  std::vector<EMMode> modes;  // uses k and u; A/Pi live in ClassicalState

  void check_step(double dt) const {
    double kmax = 0.0;
    for (const auto& m : modes) kmax = std::max(kmax, m.k);
    if (!(dt * kmax < 0.5)) throw ConfigError("em_mode_step: need dt * max(k) < 0.5");
  }
};

// Strang step: exact half rotation of each mode, velocity-Verlet particle
// substep with the modes frozen (the canonical momentum keeps the -q u A
// shift and each mode receives the exact impulse q u (a' - a)), half
// rotation again.  Reversible; exact harmonic motion at q = 0.
ClassicalState em_mode_step(const ClassicalState& s, const EMParams& params, double dt);
double em_energy(const ClassicalState& s, const EMParams& params);

// -------------------------------------------------------------- run loops --

TrajectoryRecord run_kg(const ClassicalState& s0, const KGParams& params, double dt, double t_end,
                        int sample_stride);
TrajectoryRecord run_newton(const ClassicalState& s0, const NewtonParams& params, double dt,
                            double t_end, int sample_stride);
TrajectoryRecord run_coupled(const ClassicalState& s0, const CoupledParams& params, double dt,
                             double t_end, int sample_stride);
TrajectoryRecord run_em(const ClassicalState& s0, const EMParams& params, double dt, double t_end,
                        int sample_stride);

}  // namespace tangentlab
