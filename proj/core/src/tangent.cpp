#include "tangentlab/tangent.hpp"

#include <cmath>

namespace tangentlab {

namespace {

QuantumState multiply(const QuantumState& psi, const CVector& factor) {
  return QuantumState(psi.grid_ptr(), psi.amplitudes().cwiseProduct(factor));
}

// Multiplier fields for the particle block on axis 0.
void append_particle_tangents(const QuantumState& psi, double a, double sigma,
                              std::vector<QuantumState>& out) {
  if (!(sigma > kWidthFloor)) throw DomainError("tangent_basis: sigma below width floor");
  const ConfigGrid& g = psi.grid();
  CVector da(static_cast<Eigen::Index>(g.total_points()));
  CVector dp(static_cast<Eigen::Index>(g.total_points()));
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t j = 0; j < g.total_points(); ++j) {
    const double x = g.coord(j, 0);
    da[static_cast<Eigen::Index>(j)] = (x - a) * inv;
    dp[static_cast<Eigen::Index>(j)] = Complex(0.0, x);
  }
  out.push_back(multiply(psi, da));
  out.push_back(multiply(psi, dp));
}

void append_field_tangents(const QuantumState& psi, const FieldChart& c,
                           std::size_t axis_offset, std::vector<QuantumState>& out) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(c.kernel);
  if (es.eigenvalues().minCoeff() < kWidthFloor)
    throw DomainError("tangent_basis: kernel eigenvalue below width floor");
  const ConfigGrid& g = psi.grid();
  const int n = c.sites();
  const double h2 = c.h * c.h;
  std::vector<CVector> dphi(static_cast<std::size_t>(n),
                            CVector(static_cast<Eigen::Index>(g.total_points())));
  std::vector<CVector> dpi(static_cast<std::size_t>(n),
                           CVector(static_cast<Eigen::Index>(g.total_points())));
  RVector delta(n);
  for (std::size_t j = 0; j < g.total_points(); ++j) {
    for (int d = 0; d < n; ++d)
      delta[d] = g.coord(j, axis_offset + static_cast<std::size_t>(d)) - c.phi_c[d];
    const RVector kdelta = c.kernel * delta;
    for (int d = 0; d < n; ++d) {
      dphi[static_cast<std::size_t>(d)][static_cast<Eigen::Index>(j)] = h2 * kdelta[d];
      dpi[static_cast<std::size_t>(d)][static_cast<Eigen::Index>(j)] =
          Complex(0.0, c.h * (delta[d] + c.phi_c[d]));
    }
  }
  for (int d = 0; d < n; ++d) out.push_back(multiply(psi, dphi[static_cast<std::size_t>(d)]));
  for (int d = 0; d < n; ++d) out.push_back(multiply(psi, dpi[static_cast<std::size_t>(d)]));
}

}  // namespace

std::vector<QuantumState> tangent_basis(const ParticleChart& c, const GridPtr& grid) {
  if (!(c.sigma > kWidthFloor)) throw DomainError("tangent_basis: sigma below width floor");
  const QuantumState psi = particle_state(c, grid);
  std::vector<QuantumState> out;
  append_particle_tangents(psi, c.a, c.sigma, out);
  return out;
}

std::vector<QuantumState> tangent_basis(const FieldChart& c, const GridPtr& grid) {
  const QuantumState psi = field_state(c, grid);
  std::vector<QuantumState> out;
  append_field_tangents(psi, c, 0, out);
  return out;
}

std::vector<QuantumState> tangent_basis(const ProductChart& c, const GridPtr& grid) {
  const QuantumState psi = product_state(c, grid);
  std::vector<QuantumState> out;
  append_particle_tangents(psi, c.particle.a, c.particle.sigma, out);
  append_field_tangents(psi, c.field, 1, out);
  return out;
}

std::vector<QuantumState> tangent_basis(const EMModeChart& c, const GridPtr& grid) {
  const QuantumState psi = em_state(c, grid);
  std::vector<QuantumState> out;
  append_particle_tangents(psi, c.a, c.sigma, out);
  const ConfigGrid& g = psi.grid();
  const std::size_t n = c.modes.size();
  for (std::size_t d = 0; d < n; ++d) {
    const auto& m = c.modes[d];
    if (!(m.width() > kWidthFloor)) throw DomainError("tangent_basis: mode width below floor");
    CVector dA(static_cast<Eigen::Index>(g.total_points()));
    for (std::size_t j = 0; j < g.total_points(); ++j)
      dA[static_cast<Eigen::Index>(j)] = m.width() * (g.coord(j, 1 + d) - m.A);
    out.push_back(multiply(psi, dA));
  }
  for (std::size_t d = 0; d < n; ++d) {
    CVector dPi(static_cast<Eigen::Index>(g.total_points()));
    for (std::size_t j = 0; j < g.total_points(); ++j)
      dPi[static_cast<Eigen::Index>(j)] = Complex(0.0, g.coord(j, 1 + d));
    out.push_back(multiply(psi, dPi));
  }
  return out;
}

std::vector<QuantumState> horizontal(const std::vector<QuantumState>& basis,
                                     const QuantumState& psi) {
  const double nsq = psi.norm_squared();
  std::vector<QuantumState> out;
  out.reserve(basis.size());
  for (const auto& t : basis) {
    const Complex c = inner(psi, t) / nsq;
    out.emplace_back(t.grid_ptr(), t.amplitudes() - c * psi.amplitudes());
  }
  return out;
}

RMatrix gram(const std::vector<QuantumState>& basis) {
  const int n = static_cast<int>(basis.size());
  RMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      const double v = inner(basis[static_cast<std::size_t>(j)], basis[static_cast<std::size_t>(k)]).real();
      g(j, k) = v;
      g(k, j) = v;
    }
  return g;
}

double condition_number(const RMatrix& g) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// -------------------------------------------------------------- retraction --

namespace {

void check_interior(double value, const GridAxis& ax, const std::string& what) {
  const double margin = 2.0 * ax.spacing();
  if (value < ax.min + margin || value > ax.max - margin)
    throw DomainError("retract: " + what + " outside grid interior");
}

}  // namespace

RVector retract_coords(const QuantumState& psi, const ParticleChart& family) {
  (void)family;
  RVector y(2);
  y[0] = expect_position(psi, 0);
  y[1] = phase_gradient(psi, 0);
  check_interior(y[0], psi.grid().axis(0), "particle center");
  return y;
}

RVector retract_coords(const QuantumState& psi, const FieldChart& family) {
  const int n = family.sites();
  RVector y(2 * n);
  for (int d = 0; d < n; ++d) {
    y[d] = expect_position(psi, static_cast<std::size_t>(d));
    y[n + d] = phase_gradient(psi, static_cast<std::size_t>(d)) / family.h;
    check_interior(y[d], psi.grid().axis(static_cast<std::size_t>(d)), "field center");
  }
  return y;
}

RVector retract_coords(const QuantumState& psi, const ProductChart& family) {
  const int n = family.field.sites();
  RVector y(2 + 2 * n);
  y[0] = expect_position(psi, 0);
  y[1] = phase_gradient(psi, 0);
  check_interior(y[0], psi.grid().axis(0), "particle center");
  for (int d = 0; d < n; ++d) {
    y[2 + d] = expect_position(psi, 1 + static_cast<std::size_t>(d));
    y[2 + n + d] = phase_gradient(psi, 1 + static_cast<std::size_t>(d)) / family.field.h;
    check_interior(y[2 + d], psi.grid().axis(1 + static_cast<std::size_t>(d)), "field center");
  }
  return y;
}

RVector retract_coords(const QuantumState& psi, const EMModeChart& family) {
  const int n = static_cast<int>(family.modes.size());
  RVector y(2 + 2 * n);
  y[0] = expect_position(psi, 0);
  y[1] = phase_gradient(psi, 0);
  check_interior(y[0], psi.grid().axis(0), "particle center");
  for (int d = 0; d < n; ++d) {
    y[2 + d] = expect_position(psi, 1 + static_cast<std::size_t>(d));
    y[2 + n + d] = phase_gradient(psi, 1 + static_cast<std::size_t>(d));
    check_interior(y[2 + d], psi.grid().axis(1 + static_cast<std::size_t>(d)), "mode center");
  }
  return y;
}

namespace {

template <typename ChartT>
Retraction<ChartT> retract_impl(const QuantumState& psi, const ChartT& family) {
  const RVector y = retract_coords(psi, family);
  Retraction<ChartT> r{with_coords(family, y), 0.0};
  const QuantumState fitted = build_state(r.chart, psi.grid_ptr());
  r.residual = fubini_study(psi, fitted);
  return r;
}

}  // namespace

Retraction<ParticleChart> retract(const QuantumState& psi, const ParticleChart& family) {
  return retract_impl(psi, family);
}
Retraction<FieldChart> retract(const QuantumState& psi, const FieldChart& family) {
  return retract_impl(psi, family);
}
Retraction<ProductChart> retract(const QuantumState& psi, const ProductChart& family) {
  return retract_impl(psi, family);
}
Retraction<EMModeChart> retract(const QuantumState& psi, const EMModeChart& family) {
  return retract_impl(psi, family);
}

}  // namespace tangentlab
