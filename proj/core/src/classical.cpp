#include "tangentlab/classical.hpp"

#include <cmath>

namespace tangentlab {

// ------------------------------------------------------------------ lattice --

RVector lattice_laplacian(const RVector& phi, double h, LatticeBoundary boundary) {
  const int n = static_cast<int>(phi.size());
  RVector out(n);
  const double inv_h2 = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    double left, right;
    if (boundary == LatticeBoundary::periodic) {
      left = phi[(i + n - 1) % n];
      right = phi[(i + 1) % n];
    } else {
      left = i > 0 ? phi[i - 1] : 0.0;
      right = i + 1 < n ? phi[i + 1] : 0.0;
    }
    out[i] = (right - 2.0 * phi[i] + left) * inv_h2;
  }
  return out;
}

namespace {

RVector kg_force(const RVector& phi, const KGParams& p, double t) {
  return lattice_laplacian(phi, p.h, p.boundary) - p.m * p.m * phi + p.source_at(t);
}

}  // namespace

ClassicalState kg_step(const ClassicalState& s, const KGParams& params, double dt) {
  params.check_cfl(dt);
  ClassicalState out = s;
  RVector pi_half = s.pi + 0.5 * dt * kg_force(s.phi, params, s.t);
  out.phi = s.phi + dt * pi_half;
  out.t = s.t + dt;
  out.pi = pi_half + 0.5 * dt * kg_force(out.phi, params, out.t);
  return out;
}

double kg_energy(const ClassicalState& s, const KGParams& params) {
  const int n = params.sites;
  const double h = params.h;
  double acc = 0.0;
  const RVector j = params.source_at(s.t);
  for (int i = 0; i < n; ++i) {
    acc += 0.5 * s.pi[i] * s.pi[i] + 0.5 * params.m * params.m * s.phi[i] * s.phi[i] -
           j[i] * s.phi[i];
  }
  // Gradient energy with the same bond convention as the lattice Laplacian.
  if (params.boundary == LatticeBoundary::periodic) {
    for (int i = 0; i < n; ++i) {
      const double d = (s.phi[(i + 1) % n] - s.phi[i]) / h;
      acc += 0.5 * d * d;
    }
  } else {
    double prev = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double cur = i < n ? s.phi[i] : 0.0;
      const double d = (cur - prev) / h;
      acc += 0.5 * d * d;
      prev = cur;
    }
  }
  return acc * h;
}

// --------------------------------------------------------------- smearing --

double smeared_force(double a, double sigma, const RVector& phi, double h, double x0) {
  double acc = 0.0;
  for (int i = 0; i < phi.size(); ++i) {
    const double x = x0 + h * static_cast<double>(i);
    acc += rho_sigma_da(a, sigma, x) * phi[i];
  }
  return -acc * h;
}

// ----------------------------------------------------------------- newton --

ClassicalState newton_step(const ClassicalState& s, const NewtonParams& params, double dt) {
  const Polynomial force = params.effective_potential().derivative();
  ClassicalState out = s;
  const double p_half = s.p - 0.5 * dt * force(s.a);
  out.a = s.a + dt * p_half / params.mass;
  out.t = s.t + dt;
  out.p = p_half - 0.5 * dt * force(out.a);
  return out;
}

double newton_energy(const ClassicalState& s, const NewtonParams& params) {
  return 0.5 * s.p * s.p / params.mass + params.effective_potential()(s.a);
}

// ---------------------------------------------------------------- coupled --

namespace {

double coupled_particle_force(const ClassicalState& s, const CoupledParams& p,
                              const Polynomial& v_eff_deriv) {
  double f = -v_eff_deriv(s.a);
  if (p.g == 0.0) return f;
  if (!p.lattice_consistent_force) {
    f -= p.g * smeared_force(s.a, p.coupling_smear, s.phi, p.field.h, p.field.x0);
  } else {
    const int n = p.field.sites;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double grad_rho =
          (rho_sigma_at(s.a, p.coupling_smear, p.field.site_position((i + 1) % n)) -
           rho_sigma_at(s.a, p.coupling_smear, p.field.site_position((i + n - 1) % n))) /
          (2.0 * p.field.h);
      acc += grad_rho * s.phi[i];
    }
    f -= p.g * acc * p.field.h;
  }
  return f;
}

RVector coupled_field_force(const ClassicalState& s, const CoupledParams& p, double t) {
  RVector f = lattice_laplacian(s.phi, p.field.h, p.field.boundary) -
              p.field.m * p.field.m * s.phi + p.field.source_at(t);
  if (p.g != 0.0)
    for (int i = 0; i < p.field.sites; ++i)
      f[i] += p.g * rho_sigma_at(s.a, p.coupling_smear, p.field.site_position(i));
  return f;
}

}  // namespace

ClassicalState coupled_step(const ClassicalState& s, const CoupledParams& params, double dt) {
  params.check_cfl(dt);
  const Polynomial dv = params.particle.effective_potential().derivative();
  ClassicalState out = s;

  // Joint kick-drift-kick: kinetic energy is separable in (p, pi) and the
  // potential couples only the coordinates (a, phi).
  double p_half = s.p + 0.5 * dt * coupled_particle_force(s, params, dv);
  RVector pi_half = s.pi + 0.5 * dt * coupled_field_force(s, params, s.t);

  out.a = s.a + dt * p_half / params.particle.mass;
  out.phi = s.phi + dt * pi_half;
  out.t = s.t + dt;

  ClassicalState mid = out;
  mid.p = p_half;
  mid.pi = pi_half;
  out.p = p_half + 0.5 * dt * coupled_particle_force(mid, params, dv);
  out.pi = pi_half + 0.5 * dt * coupled_field_force(mid, params, out.t);
  return out;
}

double coupled_energy(const ClassicalState& s, const CoupledParams& params) {
  double e = 0.5 * s.p * s.p / params.particle.mass +
             params.particle.effective_potential()(s.a) + kg_energy(s, params.field);
  if (params.g != 0.0) {
    double coupling = 0.0;
    for (int i = 0; i < params.field.sites; ++i)
      coupling += rho_sigma_at(s.a, params.coupling_smear, params.field.site_position(i)) * s.phi[i];
    e -= params.g * params.field.h * coupling;
  }
  return e;
}

double coupled_total_momentum(const ClassicalState& s, const CoupledParams& params) {
  // Field momentum is -h sum_i pi_i (grad phi)_i; with that sign the total
  // is the discrete Noether charge of the periodic translation-invariant
  // system (sum-by-parts makes the free-field part exactly constant).
  const int n = params.field.sites;
  const double h = params.field.h;
  double field_mom = 0.0;
  for (int i = 0; i < n; ++i) {
    const double grad = (s.phi[(i + 1) % n] - s.phi[(i + n - 1) % n]) / (2.0 * h);
    field_mom += s.pi[i] * grad;
  }
  return s.p - field_mom * h;
}

// --------------------------------------------------------------- EM modes --

namespace {

void rotate_modes(ClassicalState& s, const EMParams& params, double dt) {
  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    const double k = params.modes[i].k;
    const double c = std::cos(k * dt), sn = std::sin(k * dt);
    const double a0 = s.phi[static_cast<Eigen::Index>(i)];
    const double p0 = s.pi[static_cast<Eigen::Index>(i)];
    s.phi[static_cast<Eigen::Index>(i)] = a0 * c + (p0 / k) * sn;
    s.pi[static_cast<Eigen::Index>(i)] = p0 * c - a0 * k * sn;
  }
}

}  // namespace

ClassicalState em_mode_step(const ClassicalState& s, const EMParams& params, double dt) {
  params.check_step(dt);
  const Polynomial du = params.potential.derivative();
  ClassicalState out = s;

  rotate_modes(out, params, 0.5 * dt);

  // Particle substep with modes frozen: v = (p - q sum u A)/M obeys
  // M v' = -U'(a); the canonical p and the mode impulses follow from the
  // net displacement.
  double ua = 0.0;
  for (std::size_t i = 0; i < params.modes.size(); ++i)
    ua += params.modes[i].u * out.phi[static_cast<Eigen::Index>(i)];
  const double a_old = out.a;
  double v = (out.p - params.q * ua) / params.mass;
  const double acc0 = -du(out.a) / params.mass;
  out.a += dt * v + 0.5 * dt * dt * acc0;
  const double acc1 = -du(out.a) / params.mass;
  v += 0.5 * dt * (acc0 + acc1);
  out.p = params.mass * v + params.q * ua;
  for (std::size_t i = 0; i < params.modes.size(); ++i)
    out.pi[static_cast<Eigen::Index>(i)] += params.q * params.modes[i].u * (out.a - a_old);

  rotate_modes(out, params, 0.5 * dt);
  out.t = s.t + dt;
  return out;
}

double em_energy(const ClassicalState& s, const EMParams& params) {
  double ua = 0.0, field = 0.0;
  for (std::size_t i = 0; i < params.modes.size(); ++i) {
    const auto& m = params.modes[i];
    const double a = s.phi[static_cast<Eigen::Index>(i)];
    const double pi = s.pi[static_cast<Eigen::Index>(i)];
    ua += m.u * a;
    field += 0.5 * (pi * pi + m.k * m.k * a * a);
  }
  const double vkin = s.p - params.q * ua;
  double e = 0.5 * vkin * vkin / params.mass + field;
  if (!params.potential.empty()) e += params.potential(s.a);
  return e;
}

// -------------------------------------------------------------- run loops --

namespace {

using StepFn = std::function<ClassicalState(const ClassicalState&, double)>;
using EnergyFn = std::function<double(const ClassicalState&)>;

TrajectoryRecord run_loop(const ClassicalState& s0, double dt, double t_end, int stride,
                          const std::vector<std::string>& columns, const StepFn& step,
                          const EnergyFn& energy, bool particle, int n_field) {
  TrajectoryRecord rec;
  rec.columns = columns;
  const int steps = static_cast<int>(std::llround((t_end - s0.t) / dt));
  ClassicalState s = s0;
  for (int k = 0; k <= steps; ++k) {
    if (k % stride == 0 || k == steps) {
      std::vector<double> row;
      row.push_back(s.t);
      if (particle) {
        row.push_back(s.a);
        row.push_back(s.p);
      }
      for (int i = 0; i < n_field; ++i) row.push_back(s.phi[i]);
      for (int i = 0; i < n_field; ++i) row.push_back(s.pi[i]);
      row.push_back(energy(s));
      rec.rows.push_back(std::move(row));
    }
    if (k < steps) s = step(s, dt);
  }
  return rec;
}

std::vector<std::string> field_columns(int n, const char* phi_name, const char* pi_name) {
  std::vector<std::string> cols;
  for (int i = 0; i < n; ++i) cols.push_back(std::string(phi_name) + "_" + std::to_string(i));
  for (int i = 0; i < n; ++i) cols.push_back(std::string(pi_name) + "_" + std::to_string(i));
  return cols;
}

}  // namespace

TrajectoryRecord run_kg(const ClassicalState& s0, const KGParams& params, double dt, double t_end,
                        int sample_stride) {
  std::vector<std::string> cols = {"t"};
  for (auto& c : field_columns(params.sites, "phi", "pi")) cols.push_back(c);
  cols.push_back("energy");
  return run_loop(
      s0, dt, t_end, sample_stride, cols,
      [&](const ClassicalState& s, double d) { return kg_step(s, params, d); },
      [&](const ClassicalState& s) { return kg_energy(s, params); }, false, params.sites);
}

TrajectoryRecord run_newton(const ClassicalState& s0, const NewtonParams& params, double dt,
                            double t_end, int sample_stride) {
  return run_loop(
      s0, dt, t_end, sample_stride, {"t", "a", "p", "energy"},
      [&](const ClassicalState& s, double d) { return newton_step(s, params, d); },
      [&](const ClassicalState& s) { return newton_energy(s, params); }, true, 0);
}

TrajectoryRecord run_coupled(const ClassicalState& s0, const CoupledParams& params, double dt,
                             double t_end, int sample_stride) {
  std::vector<std::string> cols = {"t", "a", "p"};
  for (auto& c : field_columns(params.field.sites, "phi", "pi")) cols.push_back(c);
  cols.push_back("energy");
  return run_loop(
      s0, dt, t_end, sample_stride, cols,
      [&](const ClassicalState& s, double d) { return coupled_step(s, params, d); },
      [&](const ClassicalState& s) { return coupled_energy(s, params); }, true,
      params.field.sites);
}

TrajectoryRecord run_em(const ClassicalState& s0, const EMParams& params, double dt, double t_end,
                        int sample_stride) {
  std::vector<std::string> cols = {"t", "a", "p"};
  for (auto& c : field_columns(static_cast<int>(params.modes.size()), "A", "Pi"))
    cols.push_back(c);
  cols.push_back("energy");
  return run_loop(
      s0, dt, t_end, sample_stride, cols,
      [&](const ClassicalState& s, double d) { return em_mode_step(s, params, d); },
      [&](const ClassicalState& s) { return em_energy(s, params); }, true,
      static_cast<int>(params.modes.size()));
}

}  // namespace tangentlab
