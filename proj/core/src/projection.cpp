#include "tangentlab/projection.hpp"

namespace tangentlab {

ProjectedFlow project_onto_tangents(const QuantumState& psi,
                                    const std::vector<QuantumState>& basis,
                                    const QuantumState& hpsi) {
  const double nsq = psi.norm_squared();
  const std::vector<QuantumState> tb = horizontal(basis, psi);

  // w = -i H psi, quotiented by the ray direction.
  CVector w = Complex(0.0, -1.0) * hpsi.amplitudes();
  {
    const Complex c = (psi.amplitudes().dot(w) * psi.grid().measure()) / nsq;
    w -= c * psi.amplitudes();
  }
  const QuantumState wstate(psi.grid_ptr(), w);

  const int n = static_cast<int>(tb.size());
  const RMatrix g = gram(tb);
  RVector b(n);
  for (int j = 0; j < n; ++j) b[j] = inner(tb[static_cast<std::size_t>(j)], wstate).real();

  Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("Gram eigendecomposition failed");
  const RVector& lam = es.eigenvalues();
  const double cond = (lam.minCoeff() > 0.0)
                          ? lam.maxCoeff() / lam.minCoeff()
                          : std::numeric_limits<double>::infinity();
  if (!(cond < kGramConditionLimit))
    throw ConditioningError("tangent Gram matrix condition " + std::to_string(cond) +
                                " exceeds limit",
                            cond);

  const RVector z = es.eigenvectors().transpose() * b;
  RVector v = RVector::Zero(n);
  for (int k = 0; k < n; ++k) v += (z[k] / lam[k]) * es.eigenvectors().col(k);

  // Orthogonal residual of the flow.
  CVector r = wstate.amplitudes();
  for (int j = 0; j < n; ++j) r -= v[j] * tb[static_cast<std::size_t>(j)].amplitudes();
  const double rnorm = std::sqrt(r.squaredNorm() * psi.grid().measure());
  const double hnorm = hpsi.norm();

  ProjectedFlow flow;
  flow.chart_velocity = std::move(v);
  flow.residual_norm = hnorm > 0.0 ? std::min(1.0, rnorm / hnorm) : 0.0;
  flow.gram_condition = cond;
  return flow;
}

namespace {

double pair_2im(const QuantumState& psi, const CVector& opu) {
  // 2 Im <psi | opu> / <psi|psi>
  const Complex v = psi.amplitudes().dot(opu) * psi.grid().measure();
  return 2.0 * v.imag() / psi.norm_squared();
}

// d<q_d>/dt and d<p_d>/dt for one axis, with the momentum carrying an
// optional 1/h measure factor (field sites).
void axis_ehrenfest(const QuantumState& psi, const QuantumState& hpsi, std::size_t axis,
                    double momentum_scale, double& dq, double& dp) {
  const ConfigGrid& g = psi.grid();
  CVector qu(hpsi.amplitudes().size());
  for (std::size_t j = 0; j < g.total_points(); ++j)
    qu[static_cast<Eigen::Index>(j)] =
        hpsi.amplitudes()[static_cast<Eigen::Index>(j)] * g.coord(j, axis);
  dq = pair_2im(psi, qu);

  CVector pu = CVector::Zero(hpsi.amplitudes().size());
  add_momentum(hpsi, axis, 1.0, pu);
  dp = momentum_scale * pair_2im(psi, pu);
}

}  // namespace

RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const ParticleChart&) {
  const QuantumState hpsi = apply_hamiltonian(h, psi, t);
  RVector out(2);
  axis_ehrenfest(psi, hpsi, 0, 1.0, out[0], out[1]);
  return out;
}

RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const FieldChart& family) {
  const QuantumState hpsi = apply_hamiltonian(h, psi, t);
  const int n = family.sites();
  RVector out(2 * n);
  for (int d = 0; d < n; ++d)
    axis_ehrenfest(psi, hpsi, static_cast<std::size_t>(d), 1.0 / family.h, out[d], out[n + d]);
  return out;
}

RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const ProductChart& family) {
  const QuantumState hpsi = apply_hamiltonian(h, psi, t);
  const int n = family.field.sites();
  RVector out(2 + 2 * n);
  axis_ehrenfest(psi, hpsi, 0, 1.0, out[0], out[1]);
  for (int d = 0; d < n; ++d)
    axis_ehrenfest(psi, hpsi, 1 + static_cast<std::size_t>(d), 1.0 / family.field.h, out[2 + d],
                   out[2 + n + d]);
  return out;
}

RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const EMModeChart& family) {
  const QuantumState hpsi = apply_hamiltonian(h, psi, t);
  const int n = static_cast<int>(family.modes.size());
  RVector out(2 + 2 * n);
  axis_ehrenfest(psi, hpsi, 0, 1.0, out[0], out[1]);
  for (int d = 0; d < n; ++d)
    axis_ehrenfest(psi, hpsi, 1 + static_cast<std::size_t>(d), 1.0, out[2 + d], out[2 + n + d]);
  return out;
}

double loglog_slope(const std::vector<ScanPoint>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = std::log(p.width), y = std::log(p.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace tangentlab
