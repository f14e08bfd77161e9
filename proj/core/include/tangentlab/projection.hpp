#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tangentlab/hamiltonian.hpp"
#include "tangentlab/tangent.hpp"
#include "tangentlab/trajectory.hpp"

namespace tangentlab {

// Tangent component of the Schroedinger flow on a chart.
struct ProjectedFlow {
  RVector chart_velocity;   // d/dt of the chart coordinates, coords() order
  double residual_norm = 0.0;  // |(H Psi)_perp| / |H Psi|, in [0, 1]
  double gram_condition = 1.0;
};

inline constexpr double kGramConditionLimit = 1e8;

// Least-squares projection of the flow w = -i H Psi onto the real span of
// the horizontal tangent vectors: solve G v = b with G_jk = Re<T_j|T_k>,
// b_j = Re<T_j|w>.  Both the basis and the target are first quotiented by
// the ray direction, which makes the result invariant under rescaling of
// Psi and closes the tangent span under multiplication by i.
ProjectedFlow project_onto_tangents(const QuantumState& psi,
                                    const std::vector<QuantumState>& basis,
                                    const QuantumState& hpsi);

template <typename ChartT>
ProjectedFlow project_flow(const ChartT& chart, const HamiltonianSpec& h, double t,
                           const GridPtr& grid) {
  const QuantumState psi = build_state(chart, grid);
  const std::vector<QuantumState> basis = tangent_basis(chart, grid);
  const QuantumState hpsi = apply_hamiltonian(h, psi, t);
  return project_onto_tangents(psi, basis, hpsi);
}

// Ehrenfest derivatives of the retraction coordinates,
//   d<O>/dt = 2 Im <Psi| O (H Psi)>,
// with O running over the chart's position and momentum observables.
RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const ParticleChart& family);
RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const FieldChart& family);
RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const ProductChart& family);
RVector ehrenfest_flow(const QuantumState& psi, const HamiltonianSpec& h, double t,
                       const EMModeChart& family);

struct IntegrateOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  int sample_stride = 10;  // record every this many steps
  double t0 = 0.0;
};

// Classical fourth-order Runge-Kutta on the chart coordinates with
// velocities from project_flow.  Records t, the chart coordinates,
// residual_norm, energy <H>, and the Gram condition number at each sample.
template <typename ChartT>
TrajectoryRecord integrate_chart(const ChartT& chart0, const HamiltonianSpec& h,
                                 const GridPtr& grid, const IntegrateOptions& opt) {
  TrajectoryRecord rec;
  rec.columns = {"t"};
  for (const auto& n : coord_names(chart0)) rec.columns.push_back(n);
  rec.columns.push_back("residual_norm");
  rec.columns.push_back("energy");
  rec.columns.push_back("gram_condition");

  const int steps = static_cast<int>(std::llround((opt.t_end - opt.t0) / opt.dt));
  RVector y = coords(chart0);

  ProjectedFlow last{};
  auto velocity = [&](double t, const RVector& yy) -> RVector {
    last = project_flow(with_coords(chart0, yy), h, t, grid);
    return last.chart_velocity;
  };

  auto record = [&](double t, const RVector& yy, const ProjectedFlow& flow) {
    const ChartT c = with_coords(chart0, yy);
    std::vector<double> row;
    row.push_back(t);
    for (Eigen::Index i = 0; i < yy.size(); ++i) row.push_back(yy[i]);
    row.push_back(flow.residual_norm);
    row.push_back(expect_energy(h, build_state(c, grid), t));
    row.push_back(flow.gram_condition);
    rec.rows.push_back(std::move(row));
  };

  for (int s = 0; s <= steps; ++s) {
    const double t = opt.t0 + s * opt.dt;
    const RVector k1 = velocity(t, y);
    if (s % opt.sample_stride == 0 || s == steps) record(t, y, last);
    if (s == steps) break;
    const double dt = opt.dt;
    const RVector k2 = velocity(t + 0.5 * dt, y + 0.5 * dt * k1);
    const RVector k3 = velocity(t + 0.5 * dt, y + 0.5 * dt * k2);
    const RVector k4 = velocity(t + dt, y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rec;
}

// Deviation between the projected force/velocity and a classical reference,
// per width value; used by the width-scaling diagnostics.
struct ScanPoint {
  double width;
  double deviation;
};

// Least-squares slope of log(deviation) vs log(width).
double loglog_slope(const std::vector<ScanPoint>& points);

// Sweep a localization width: for each value, build the configured system,
// project the flow, and record the distance of one velocity component from
// its classical reference value.  `setup` maps a width to (chart, H, grid,
// reference) for that width.
template <typename ChartT>
struct ScanCase {
  ChartT chart;
  HamiltonianSpec hamiltonian;
  GridPtr grid;
  double reference = 0.0;  // classical value of the scanned velocity component
  int component = 0;       // index into the chart velocity
};

template <typename ChartT, typename Setup>
std::vector<ScanPoint> scan_force_deviation(const std::vector<double>& widths, Setup&& setup) {
  std::vector<ScanPoint> out;
  out.reserve(widths.size());
  for (const double w : widths) {
    const ScanCase<ChartT> c = setup(w);
    const ProjectedFlow flow = project_flow(c.chart, c.hamiltonian, 0.0, c.grid);
    out.push_back({w, std::abs(flow.chart_velocity[c.component] - c.reference)});
  }
  return out;
}

}  // namespace tangentlab
