#include "tangentlab/systems.hpp"

namespace tangentlab {

namespace {

// Gradient energy per lattice configuration. Periodic: bonds (i, i+1 mod N)
// for every i. Fixed: ghost sites pinned to zero beyond both ends.
double gradient_energy(const RVector& phi, double h, LatticeBoundary boundary) {
  const int n = static_cast<int>(phi.size());
  double acc = 0.0;
  if (boundary == LatticeBoundary::periodic) {
    for (int i = 0; i < n; ++i) {
      const double d = phi[(i + 1) % n] - phi[i];
      acc += d * d;
    }
  } else {
    acc += phi[0] * phi[0];
    for (int i = 0; i + 1 < n; ++i) {
      const double d = phi[i + 1] - phi[i];
      acc += d * d;
    }
    acc += phi[n - 1] * phi[n - 1];
  }
  return 0.5 * acc / h;  // (1/2) sum ((dphi)/h)^2 * h
}

}  // namespace

RVector field_potential_diagonal(const ConfigGrid& grid, const FieldChart& medium,
                                 double quartic, std::size_t axis_offset) {
  const int n = medium.sites();
  const double h = medium.h;
  const double m2 = medium.m * medium.m;
  RVector out(static_cast<Eigen::Index>(grid.total_points()));
  RVector phi(n);
  for (std::size_t j = 0; j < grid.total_points(); ++j) {
    for (int d = 0; d < n; ++d) phi[d] = grid.coord(j, axis_offset + static_cast<std::size_t>(d));
    double v = gradient_energy(phi, h, medium.boundary);
    for (int d = 0; d < n; ++d) {
      const double f = phi[d];
      v += h * (0.5 * m2 * f * f + 0.25 * quartic * f * f * f * f);
    }
    out[static_cast<Eigen::Index>(j)] = v;
  }
  return out;
}

HamiltonianSpec particle_hamiltonian(const GridPtr& grid, double mass, const Polynomial& v) {
  if (grid->rank() != 1) throw GridMismatchError("particle_hamiltonian expects a rank-1 grid");
  HamiltonianSpec h(grid);
  h.add_kinetic(0, 1.0 / (2.0 * mass));
  RVector pot(static_cast<Eigen::Index>(grid->total_points()));
  for (std::size_t j = 0; j < grid->total_points(); ++j)
    pot[static_cast<Eigen::Index>(j)] = v(grid->coord(j, 0));
  h.add_potential(pot);
  return h;
}

HamiltonianSpec field_hamiltonian(const GridPtr& grid, const FieldChart& medium,
                                  const FieldSource& source, double quartic,
                                  std::size_t axis_offset) {
  const int n = medium.sites();
  if (grid->rank() < axis_offset + static_cast<std::size_t>(n))
    throw GridMismatchError("field_hamiltonian: grid has too few axes");

  HamiltonianSpec h(grid);
  for (int d = 0; d < n; ++d)
    h.add_kinetic(axis_offset + static_cast<std::size_t>(d), 1.0 / (2.0 * medium.h));
  h.add_potential(field_potential_diagonal(*grid, medium, quartic, axis_offset));

  if (!source.empty()) {
    if (source.amplitude.size() != n)
      throw ConfigError("field source amplitude length must equal site count");
    // Precompute sum_i J0_i phi_i over the grid once.
    RVector base = RVector::Zero(static_cast<Eigen::Index>(grid->total_points()));
    for (int d = 0; d < n; ++d)
      base += source.amplitude[d] * coordinate_field(*grid, axis_offset + static_cast<std::size_t>(d));
    base *= -medium.h;
    if (source.time_dependent) {
      const SourceProfile prof = source.profile;
      h.set_time_potential([base, prof](double t) -> RVector { return base * prof(t); });
    } else {
      h.add_potential(base);
    }
  }
  return h;
}

HamiltonianSpec coupled_hamiltonian(const GridPtr& grid, const ProductChart& family,
                                    const Polynomial& v, const FieldSource& source) {
  const int n = family.field.sites();
  if (static_cast<int>(grid->rank()) != 1 + n)
    throw GridMismatchError("coupled_hamiltonian: grid rank must be 1 + site count");

  HamiltonianSpec h = field_hamiltonian(grid, family.field, source, 0.0, 1);
  h.add_kinetic(0, 1.0 / (2.0 * family.particle.mass));

  const double g = family.g;
  const double sig = family.particle.sigma;
  const double hf = family.field.h;
  RVector pot(static_cast<Eigen::Index>(grid->total_points()));
  for (std::size_t j = 0; j < grid->total_points(); ++j) {
    const double x = grid->coord(j, 0);
    double val = v(x);
    if (g != 0.0) {
      double coupling = 0.0;
      for (int d = 0; d < n; ++d)
        coupling += rho_sigma_at(x, sig, family.field.site_position(d)) * grid->coord(j, 1 + static_cast<std::size_t>(d));
      val -= g * hf * coupling;
    }
    pot[static_cast<Eigen::Index>(j)] = val;
  }
  h.add_potential(pot);
  return h;
}

HamiltonianSpec em_hamiltonian(const GridPtr& grid, const EMModeChart& family) {
  const std::size_t n = family.modes.size();
  if (grid->rank() != 1 + n)
    throw GridMismatchError("em_hamiltonian: grid rank must be 1 + mode count");

  HamiltonianSpec h(grid);
  h.add_kinetic(0, 1.0 / (2.0 * family.mass));
  for (std::size_t d = 0; d < n; ++d) h.add_kinetic(1 + d, 0.5);

  const double q = family.q;
  const double mass = family.mass;
  RVector pot(static_cast<Eigen::Index>(grid->total_points()));
  RVector cross = RVector::Zero(static_cast<Eigen::Index>(grid->total_points()));
  for (std::size_t j = 0; j < grid->total_points(); ++j) {
    const double x = grid->coord(j, 0);
    double val = family.potential.empty() ? 0.0 : family.potential(x);
    double ua = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      const auto& m = family.modes[d];
      const double qd = grid->coord(j, 1 + d);
      val += 0.5 * m.k * m.k * qd * qd;
      ua += m.u * qd;
    }
    val += 0.5 * q * q * ua * ua / mass;
    pot[static_cast<Eigen::Index>(j)] = val;
    cross[static_cast<Eigen::Index>(j)] = -(q / mass) * ua;
  }
  h.add_potential(pot);
  if (q != 0.0) h.add_momentum_coupling(0, std::move(cross));
  return h;
}

}  // namespace tangentlab
