#include "tangentlab/charts.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace tangentlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void check_tails_1d(const CVector& amp, const std::string& what) {
  double peak = 0.0;
  for (Eigen::Index j = 0; j < amp.size(); ++j) peak = std::max(peak, std::abs(amp[j]));
  const double edge = std::max(std::abs(amp[0]), std::abs(amp[amp.size() - 1]));
  if (edge > kTailTolerance * peak)
    throw DomainError(what + ": tail clipped by grid boundary (relative edge amplitude " +
                      sci(edge / peak) + ")");
}

void check_positive_definite(const RMatrix& k) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(k);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw DomainError("field kernel K must be symmetric positive definite");
}

// Particle factor sampled on one axis, analytically normalized then left for
// the caller to grid-normalize.
CVector particle_factor(const ParticleChart& c, const GridAxis& ax) {
  if (!(c.sigma > 0.0)) throw DomainError("particle chart: sigma must be positive");
  CVector v(ax.n);
  const double norm = std::pow(2.0 * kPi * c.sigma * c.sigma, -0.25);
  for (int i = 0; i < ax.n; ++i) {
    const double x = ax.point(i);
    const double u = x - c.a;
    v[i] = norm * std::exp(Complex(-u * u / (4.0 * c.sigma * c.sigma), c.p * x));
  }
  return v;
}

// Field factor over the chart's own axes (axis d of the grid slice is the
// amplitude of site d).
CVector field_factor(const FieldChart& c, const ConfigGrid& g, std::size_t axis_offset) {
  const int n = c.sites();
  if (c.pi_c.size() != n || c.kernel.rows() != n || c.kernel.cols() != n)
    throw DomainError("field chart: phi_c, pi_c, K dimensions disagree");
  if (!(c.h > 0.0)) throw DomainError("field chart: lattice spacing h must be positive");
  check_positive_definite(c.kernel);

  const double h2 = c.h * c.h;
  const std::size_t total = g.total_points();
  CVector v(static_cast<Eigen::Index>(total));
  RVector delta(n);
  for (std::size_t j = 0; j < total; ++j) {
    double phase = 0.0;
    for (int d = 0; d < n; ++d) {
      const double phi = g.coord(j, axis_offset + static_cast<std::size_t>(d));
      delta[d] = phi - c.phi_c[d];
      phase += c.pi_c[d] * phi;
    }
    const double quad = delta.dot(c.kernel * delta);
    v[static_cast<Eigen::Index>(j)] = std::exp(Complex(-0.5 * h2 * quad, c.h * phase));
  }
  return v;
}

CVector mode_factor(const EMMode& mode, const GridAxis& ax) {
  CVector v(ax.n);
  const double w = mode.width();
  if (!(w > 0.0)) throw DomainError("EM mode: width parameter must be positive");
  for (int i = 0; i < ax.n; ++i) {
    const double q = ax.point(i);
    const double d = q - mode.A;
    v[i] = std::exp(Complex(-0.5 * w * d * d, mode.Pi * q));
  }
  return v;
}

}  // namespace

// ----------------------------------------------------------------- coords --

RVector coords(const ParticleChart& c) {
  RVector y(2);
  y << c.a, c.p;
  return y;
}

RVector coords(const FieldChart& c) {
  const int n = c.sites();
  RVector y(2 * n);
  y.head(n) = c.phi_c;
  y.tail(n) = c.pi_c;
  return y;
}

RVector coords(const ProductChart& c) {
  const RVector f = coords(c.field);
  RVector y(2 + f.size());
  y[0] = c.particle.a;
  y[1] = c.particle.p;
  y.tail(f.size()) = f;
  return y;
}

RVector coords(const EMModeChart& c) {
  const int n = static_cast<int>(c.modes.size());
  RVector y(2 + 2 * n);
  y[0] = c.a;
  y[1] = c.p;
  for (int i = 0; i < n; ++i) {
    y[2 + i] = c.modes[static_cast<std::size_t>(i)].A;
    y[2 + n + i] = c.modes[static_cast<std::size_t>(i)].Pi;
  }
  return y;
}

ParticleChart with_coords(const ParticleChart& ref, const RVector& y) {
  ParticleChart c = ref;
  c.a = y[0];
  c.p = y[1];
  return c;
}

FieldChart with_coords(const FieldChart& ref, const RVector& y) {
  FieldChart c = ref;
  const int n = ref.sites();
  c.phi_c = y.head(n);
  c.pi_c = y.tail(n);
  return c;
}

ProductChart with_coords(const ProductChart& ref, const RVector& y) {
  ProductChart c = ref;
  c.particle.a = y[0];
  c.particle.p = y[1];
  c.field = with_coords(ref.field, RVector(y.tail(y.size() - 2)));
  return c;
}

EMModeChart with_coords(const EMModeChart& ref, const RVector& y) {
  EMModeChart c = ref;
  const int n = static_cast<int>(ref.modes.size());
  c.a = y[0];
  c.p = y[1];
  for (int i = 0; i < n; ++i) {
    c.modes[static_cast<std::size_t>(i)].A = y[2 + i];
    c.modes[static_cast<std::size_t>(i)].Pi = y[2 + n + i];
  }
  return c;
}

std::vector<std::string> coord_names(const ParticleChart&) { return {"a", "p"}; }

std::vector<std::string> coord_names(const FieldChart& c) {
  std::vector<std::string> names;
  for (int i = 0; i < c.sites(); ++i) names.push_back("phi_" + std::to_string(i));
  for (int i = 0; i < c.sites(); ++i) names.push_back("pi_" + std::to_string(i));
  return names;
}

std::vector<std::string> coord_names(const ProductChart& c) {
  std::vector<std::string> names = {"a", "p"};
  for (const auto& n : coord_names(c.field)) names.push_back(n);
  return names;
}

std::vector<std::string> coord_names(const EMModeChart& c) {
  std::vector<std::string> names = {"a", "p"};
  for (std::size_t i = 0; i < c.modes.size(); ++i) names.push_back("A_" + std::to_string(i));
  for (std::size_t i = 0; i < c.modes.size(); ++i) names.push_back("Pi_" + std::to_string(i));
  return names;
}

// -------------------------------------------------------------- densities --

double rho_sigma_at(double a, double sigma, double x) {
  const double u = (x - a) / sigma;
  return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * kPi));
}

double rho_sigma_da(double a, double sigma, double x) {
  return rho_sigma_at(a, sigma, x) * (x - a) / (sigma * sigma);
}

RVector rho_sigma(double a, double sigma, const GridAxis& axis) {
  if (!(sigma > 0.0)) throw DomainError("rho_sigma: sigma must be positive");
  RVector r(axis.n);
  for (int i = 0; i < axis.n; ++i) r[i] = rho_sigma_at(a, sigma, axis.point(i));
  const double edge = std::max(r[0], r[axis.n - 1]);
  if (edge > kTailTolerance * r.maxCoeff())
    throw DomainError("rho_sigma: density tail clipped by lattice extent");
  return r;
}

// --------------------------------------------------------------- builders --

QuantumState particle_state(const ParticleChart& c, const GridPtr& grid) {
  if (grid->rank() != 1) throw GridMismatchError("particle_state expects a rank-1 grid");
  CVector amp = particle_factor(c, grid->axis(0));
  check_tails_1d(amp, "particle_state");
  return QuantumState(grid, std::move(amp)).normalized();
}

QuantumState field_state(const FieldChart& c, const GridPtr& grid) {
  if (static_cast<int>(grid->rank()) != c.sites())
    throw GridMismatchError("field_state: grid rank must equal site count");
  CVector amp = field_factor(c, *grid, 0);
  QuantumState psi = QuantumState(grid, std::move(amp)).normalized();
  // Tail check per axis: the largest amplitude on each boundary face.
  const CVector& a = psi.amplitudes();
  const double peak = a.cwiseAbs().maxCoeff();
  for (std::size_t d = 0; d < grid->rank(); ++d) {
    double edge = 0.0;
    const int nd = grid->axis(d).n;
    for (std::size_t j = 0; j < grid->total_points(); ++j) {
      const int i = grid->index_along(j, d);
      if (i == 0 || i == nd - 1) edge = std::max(edge, std::abs(a[static_cast<Eigen::Index>(j)]));
    }
    if (edge > kTailTolerance * peak)
      throw DomainError("field_state: tail clipped along axis " + std::to_string(d));
  }
  return psi;
}

QuantumState product_state(const ProductChart& c, const GridPtr& grid) {
  const int n = c.field.sites();
  if (static_cast<int>(grid->rank()) != 1 + n)
    throw GridMismatchError("product_state: grid rank must be 1 + site count");
  CVector pf = particle_factor(c.particle, grid->axis(0));
  check_tails_1d(pf, "product_state (particle factor)");

  // Field factor over the trailing axes: evaluate on a field-only view.
  std::vector<GridAxis> faxes(grid->axes().begin() + 1, grid->axes().end());
  ConfigGrid fgrid(faxes);
  CVector ff = field_factor(c.field, fgrid, 0);

  const std::size_t nf = fgrid.total_points();
  CVector amp(static_cast<Eigen::Index>(grid->total_points()));
  for (int i = 0; i < grid->axis(0).n; ++i)
    amp.segment(static_cast<Eigen::Index>(i) * static_cast<Eigen::Index>(nf),
                static_cast<Eigen::Index>(nf)) = pf[i] * ff;
  QuantumState psi = QuantumState(grid, std::move(amp)).normalized();

  // Field tails on the product grid reduce to the factor's own tails.
  double peak = 0.0, edge = 0.0;
  for (Eigen::Index j = 0; j < ff.size(); ++j) peak = std::max(peak, std::abs(ff[j]));
  for (std::size_t d = 0; d < fgrid.rank(); ++d) {
    const int nd = fgrid.axis(d).n;
    for (std::size_t j = 0; j < nf; ++j) {
      const int i = fgrid.index_along(j, d);
      if (i == 0 || i == nd - 1) edge = std::max(edge, std::abs(ff[static_cast<Eigen::Index>(j)]));
    }
  }
  if (edge > kTailTolerance * peak) throw DomainError("product_state: field tail clipped");
  return psi;
}

QuantumState em_state(const EMModeChart& c, const GridPtr& grid) {
  const std::size_t n_modes = c.modes.size();
  if (grid->rank() != 1 + n_modes)
    throw GridMismatchError("em_state: grid rank must be 1 + mode count");
  ParticleChart pc{c.a, c.p, c.sigma, c.mass};
  CVector amp = particle_factor(pc, grid->axis(0));
  check_tails_1d(amp, "em_state (particle factor)");
  for (std::size_t m = 0; m < n_modes; ++m) {
    CVector mf = mode_factor(c.modes[m], grid->axis(1 + m));
    check_tails_1d(mf, "em_state (mode " + std::to_string(m) + ")");
    CVector next(amp.size() * mf.size());
    for (Eigen::Index i = 0; i < amp.size(); ++i) next.segment(i * mf.size(), mf.size()) = amp[i] * mf;
    amp = std::move(next);
  }
  return QuantumState(grid, std::move(amp)).normalized();
}

// ------------------------------------------------------------------ grids --

GridPtr particle_grid(const ParticleChart& c, int n, double margin) {
  // 9 sigma keeps the relative boundary amplitude exp(-81/4) ~ 2e-9 under
  // the 1e-8 tail contract (8 sigma would leave ~1e-7).
  const double half = 9.0 * c.sigma + margin;
  return make_grid({symmetric_axis("x", half, n, c.a)});
}

GridPtr field_grid(const FieldChart& c, int n_per_axis, double span) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(c.kernel);
  const double lambda_min = es.eigenvalues().minCoeff();
  if (!(lambda_min > 0.0)) throw DomainError("field_grid: kernel not positive definite");
  const double width = 1.0 / (c.h * std::sqrt(lambda_min));  // amplitude std scale
  std::vector<GridAxis> axes;
  for (int i = 0; i < c.sites(); ++i)
    axes.push_back(symmetric_axis("phi_" + std::to_string(i), span * width, n_per_axis,
                                  c.phi_c[i]));
  return make_grid(std::move(axes));
}

GridPtr product_grid(const ProductChart& c, int n_particle, int n_field, double margin,
                     double span) {
  const GridPtr pg = particle_grid(c.particle, n_particle, margin);
  const GridPtr fg = field_grid(c.field, n_field, span);
  std::vector<GridAxis> axes = {pg->axis(0)};
  for (const auto& ax : fg->axes()) axes.push_back(ax);
  return make_grid(std::move(axes));
}

GridPtr em_grid(const EMModeChart& c, int n_particle, int n_mode, double margin, double span) {
  std::vector<GridAxis> axes = {
      symmetric_axis("x", 9.0 * c.sigma + margin, n_particle, c.a)};
  for (std::size_t i = 0; i < c.modes.size(); ++i) {
    const auto& m = c.modes[i];
    const double width = 1.0 / std::sqrt(m.width());
    axes.push_back(symmetric_axis("q_" + std::to_string(i), span * width, n_mode, m.A));
  }
  return make_grid(std::move(axes));
}

}  // namespace tangentlab
