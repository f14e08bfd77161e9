#include "experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <tangentlab/classical.hpp>
#include <tangentlab/projection.hpp>
#include <tangentlab/rm_walk.hpp>
#include <tangentlab/systems.hpp>
#include <tangentlab/version.hpp>

#include "compare.hpp"
#include "csv.hpp"
#include "stats.hpp"
#include "svg.hpp"

namespace tangentlab::diag {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- helpers --

void apply_defaults(Config& cfg, const std::vector<std::pair<std::string, std::string>>& defs) {
  for (const auto& [k, v] : defs)
    if (!cfg.has(k)) cfg.set(k, v);
}

double positive_number(const Config& cfg, const std::string& key) {
  const double v = cfg.number(key);
  if (!(v > 0.0))
    throw ConfigError("key '" + key + "' (line " + std::to_string(cfg.line_of(key)) +
                      "): must be positive, got " + format_double(v));
  return v;
}

ParticleChart read_particle(const Config& cfg) {
  ParticleChart c;
  c.a = cfg.number("particle.a");
  c.p = cfg.number("particle.p");
  c.sigma = positive_number(cfg, "particle.sigma");
  c.mass = positive_number(cfg, "particle.mass");
  return c;
}

LatticeBoundary read_boundary(const Config& cfg, const std::string& key) {
  const std::string b = cfg.text(key);
  if (b == "periodic") return LatticeBoundary::periodic;
  if (b == "fixed") return LatticeBoundary::fixed;
  throw ConfigError("key '" + key + "': expected 'periodic' or 'fixed', got '" + b + "'");
}

FieldChart read_field(const Config& cfg) {
  FieldChart c;
  const int n = cfg.integer("field.n");
  if (n < 1) throw ConfigError("key 'field.n': need at least one site");
  c.h = positive_number(cfg, "field.h");
  c.m = positive_number(cfg, "field.m");
  c.boundary = read_boundary(cfg, "field.boundary");
  c.x0 = FieldChart::centered_origin(n, c.h);

  auto broadcast = [&](const std::string& key) {
    std::vector<double> v = cfg.list(key);
    if (v.size() == 1) v.assign(static_cast<std::size_t>(n), v[0]);
    if (static_cast<int>(v.size()) != n)
      throw ConfigError("key '" + key + "': expected " + std::to_string(n) + " entries");
    return RVector::Map(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  c.phi_c = broadcast("field.phi_c");
  c.pi_c = broadcast("field.pi_c");

  const std::vector<double> k = cfg.list("field.K");
  if (k.size() == 1) {
    c.kernel = k[0] * RMatrix::Identity(n, n);
  } else if (static_cast<int>(k.size()) == n) {
    c.kernel = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) c.kernel(i, i) = k[static_cast<std::size_t>(i)];
  } else if (static_cast<int>(k.size()) == n * n) {
    c.kernel = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.kernel(i, j) = k[static_cast<std::size_t>(i * n + j)];
  } else {
    throw ConfigError("key 'field.K': expected a scalar, a diagonal, or a full matrix");
  }
  return c;
}

Polynomial read_poly(const Config& cfg, const std::string& key) {
  if (!cfg.has(key)) return Polynomial{};
  return Polynomial(cfg.list(key));
}

FieldSource read_source(const Config& cfg, int sites) {
  FieldSource src;
  if (!cfg.has("source.j")) return src;
  std::vector<double> j = cfg.list("source.j");
  if (j.size() == 1) j.assign(static_cast<std::size_t>(sites), j[0]);
  if (static_cast<int>(j.size()) != sites)
    throw ConfigError("key 'source.j': expected " + std::to_string(sites) + " entries");
  src.amplitude = RVector::Map(j.data(), static_cast<Eigen::Index>(j.size()));
  const std::string profile = cfg.text("source.profile");
  // Profile parameters are read unconditionally so a profile switch does not
  // turn leftover keys into unknown-key errors.
  src.profile.omega = cfg.number_or("source.omega", 1.0);
  src.profile.t0 = cfg.number_or("source.t0", 0.0);
  src.profile.tau = cfg.number_or("source.tau", 1.0);
  if (!(src.profile.tau > 0.0)) throw ConfigError("key 'source.tau': must be positive");
  if (profile == "const") {
    src.profile.kind = SourceProfile::Kind::constant;
    src.time_dependent = false;
  } else if (profile == "sine") {
    src.profile.kind = SourceProfile::Kind::sine;
    src.time_dependent = true;
  } else if (profile == "pulse") {
    src.profile.kind = SourceProfile::Kind::pulse;
    src.time_dependent = true;
  } else {
    throw ConfigError("key 'source.profile': expected const|sine|pulse, got '" + profile + "'");
  }
  return src;
}

GridPtr field_axes_from(const Config& cfg, const FieldChart& field) {
  const int n = cfg.integer("grid.field.n");
  const double span = positive_number(cfg, "grid.field.span");
  const double margin = cfg.number("grid.field.margin");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(field.kernel);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("key 'field.K': kernel must be positive definite");
  const double width = 1.0 / (field.h * std::sqrt(es.eigenvalues().minCoeff()));
  std::vector<GridAxis> axes;
  for (int i = 0; i < field.sites(); ++i)
    axes.push_back(symmetric_axis("phi_" + std::to_string(i), span * width + margin, n));
  return make_grid(std::move(axes));
}

CsvMetadata base_metadata(const Config& cfg, const std::string& experiment) {
  CsvMetadata md;
  md.add("experiment", experiment);
  if (cfg.has("seed")) md.add("seed", cfg.text("seed"));
  return md;
}

void write_manifest(const Config& cfg, const std::string& dir) {
  std::ofstream out(fs::path(dir) / "manifest.cfg");
  out << "# effective configuration; re-running this file reproduces the outputs\n";
  out << "# tangentlab_version = " << kVersion << "\n";
  out << cfg.serialize();
}

CheckResult bounded_check(const std::string& name, double value, double bound) {
  CheckResult c;
  c.name = name;
  c.pass = value < bound;
  c.detail = format_double(value) + (c.pass ? " < " : " >= ") + format_double(bound);
  return c;
}

CheckResult range_check(const std::string& name, double value, double lo, double hi) {
  CheckResult c;
  c.name = name;
  c.pass = value >= lo && value <= hi;
  c.detail = format_double(value) + (c.pass ? " in [" : " outside [") + format_double(lo) + ", " +
             format_double(hi) + "]";
  return c;
}

Series column_series(const TrajectoryRecord& rec, const std::string& x, const std::string& y,
                     const std::string& label) {
  return Series{label, rec.column(x), rec.column(y)};
}

// ------------------------------------------------------- kg-projection ----

const std::vector<std::pair<std::string, std::string>> kKgDefaults = {
    {"field.n", "1"},         {"field.h", "1.0"},
    {"field.m", "1.0"},       {"field.K", "1.0"},
    {"field.boundary", "periodic"},
    {"field.phi_c", "[0.001]"},
    {"field.pi_c", "[0.0]"},
    {"source.j", "[0.0006]"}, {"source.profile", "sine"},
    {"source.omega", "1.3"},
    {"grid.field.n", "64"},   {"grid.field.span", "6.3"},
    {"grid.field.margin", "0.02"},
    {"run.t_end", "10.0"},    {"run.dt", "0.002"},
    {"run.sample_stride", "25"},
    {"oracle.dt", "0.001"},
    {"check.tolerance", "1e-4"},
};

ExperimentResult run_kg_projection(Config& cfg, const std::string& dir, bool svg) {
  apply_defaults(cfg, kKgDefaults);
  const FieldChart field = read_field(cfg);
  const FieldSource source = read_source(cfg, field.sites());
  const GridPtr grid = field_axes_from(cfg, field);
  const HamiltonianSpec h = field_hamiltonian(grid, field, source);

  IntegrateOptions opt;
  opt.dt = positive_number(cfg, "run.dt");
  opt.t_end = positive_number(cfg, "run.t_end");
  opt.sample_stride = cfg.integer("run.sample_stride");
  const TrajectoryRecord projected = integrate_chart(field, h, grid, opt);

  KGParams kg;
  kg.sites = field.sites();
  kg.h = field.h;
  kg.m = field.m;
  kg.boundary = field.boundary;
  kg.x0 = field.x0;
  kg.source_amplitude = source.empty() ? RVector() : source.amplitude;
  kg.source_profile = source.profile;
  kg.source_time_dependent = source.time_dependent;
  ClassicalState s0;
  s0.phi = field.phi_c;
  s0.pi = field.pi_c;
  const double odt = positive_number(cfg, "oracle.dt");
  const TrajectoryRecord oracle =
      run_kg(s0, kg, odt, opt.t_end, std::max(1, static_cast<int>(std::llround(opt.dt * opt.sample_stride / odt))));

  ExperimentResult result;
  CsvMetadata md = base_metadata(cfg, "kg-projection");
  write_csv((fs::path(dir) / "projected.csv").string(), projected, md);
  write_csv((fs::path(dir) / "oracle.csv").string(), oracle, md);
  result.artifacts = {"projected.csv", "oracle.csv"};

  std::vector<std::string> coord_cols;
  for (const auto& c : coord_names(field)) coord_cols.push_back(c);
  const CompareReport rep =
      compare_records(projected, oracle, cfg.number("check.tolerance"), coord_cols);
  double worst = 0.0;
  for (const auto& c : rep.columns) worst = std::max(worst, c.max_dev);
  result.checks.push_back(bounded_check("kg_projection_max_coordinate_deviation", worst,
                                        cfg.number("check.tolerance")));

  if (svg) {
    write_svg_plot((fs::path(dir) / "overlay.svg").string(),
                   {column_series(projected, "t", "phi_0", "projected phi_0"),
                    column_series(oracle, "t", "phi_0", "oracle phi_0")},
                   {"projected chart vs lattice integrator", "t", "phi_0"});
    write_svg_plot((fs::path(dir) / "residual.svg").string(),
                   {column_series(projected, "t", "residual_norm", "residual")},
                   {"orthogonal flow residual", "t", "residual_norm"});
    result.artifacts.push_back("overlay.svg");
    result.artifacts.push_back("residual.svg");
  }
  return result;
}

// ------------------------------------------------------------- coupled ----

const std::vector<std::pair<std::string, std::string>> kCoupledDefaults = {
    {"particle.a", "0.6"},     {"particle.p", "0.0"},
    {"particle.sigma", "0.3"}, {"particle.mass", "1.0"},
    {"potential.v", "[0, 0, 0, 0, 0.25]"},
    {"field.n", "1"},          {"field.h", "1.0"},
    {"field.m", "1.0"},        {"field.K", "1.0"},
    {"field.boundary", "periodic"},
    {"field.phi_c", "[0.08]"}, {"field.pi_c", "[0.0]"},
    {"coupling.g", "0.2"},
    {"grid.particle.n", "128"},
    {"grid.particle.halfwidth", "3.9"},
    {"grid.field.n", "64"},    {"grid.field.span", "6.6"},
    {"grid.field.margin", "0.25"},
    {"run.t_end", "5.0"},      {"run.dt", "0.004"},
    {"run.sample_stride", "25"},
    {"oracle.dt", "0.0005"},
    {"check.tolerance", "1e-2"},
};

ExperimentResult run_coupled_experiment(Config& cfg, const std::string& dir, bool svg) {
  apply_defaults(cfg, kCoupledDefaults);
  ProductChart chart;
  chart.particle = read_particle(cfg);
  chart.field = read_field(cfg);
  chart.g = cfg.number("coupling.g");
  const double smear =
      cfg.number_or("coupling.smear", std::sqrt(2.0) * chart.particle.sigma);
  const Polynomial v = read_poly(cfg, "potential.v");

  const GridPtr fgrid = field_axes_from(cfg, chart.field);
  std::vector<GridAxis> axes = {symmetric_axis(
      "x", positive_number(cfg, "grid.particle.halfwidth"), cfg.integer("grid.particle.n"))};
  for (const auto& ax : fgrid->axes()) axes.push_back(ax);
  const GridPtr grid = make_grid(std::move(axes));

  const HamiltonianSpec h = coupled_hamiltonian(grid, chart, v);

  IntegrateOptions opt;
  opt.dt = positive_number(cfg, "run.dt");
  opt.t_end = positive_number(cfg, "run.t_end");
  opt.sample_stride = cfg.integer("run.sample_stride");
  const TrajectoryRecord projected = integrate_chart(chart, h, grid, opt);

  CoupledParams cp;
  cp.particle.mass = chart.particle.mass;
  cp.particle.v = v;
  cp.particle.v_smear = chart.particle.sigma;
  cp.field.sites = chart.field.sites();
  cp.field.h = chart.field.h;
  cp.field.m = chart.field.m;
  cp.field.boundary = chart.field.boundary;
  cp.field.x0 = chart.field.x0;
  cp.g = chart.g;
  cp.coupling_smear = smear;
  ClassicalState s0;
  s0.a = chart.particle.a;
  s0.p = chart.particle.p;
  s0.phi = chart.field.phi_c;
  s0.pi = chart.field.pi_c;
  const double odt = positive_number(cfg, "oracle.dt");
  const TrajectoryRecord oracle = run_coupled(
      s0, cp, odt, opt.t_end,
      std::max(1, static_cast<int>(std::llround(opt.dt * opt.sample_stride / odt))));

  ExperimentResult result;
  CsvMetadata md = base_metadata(cfg, "coupled");
  md.add("coupling.smear_effective", format_double(smear));
  // Smallness bound of the coarse-graining regime: the width must stay
  // below the variation scale of the potential, sigma^2 |V'''| << |V'|.
  {
    const Polynomial v3 = v.derivative().derivative().derivative();
    const double bound =
        chart.particle.sigma * chart.particle.sigma * std::abs(v3(chart.particle.a));
    md.add("smallness.sigma2_v3", format_double(bound));
  }
  write_csv((fs::path(dir) / "projected.csv").string(), projected, md);
  write_csv((fs::path(dir) / "oracle.csv").string(), oracle, md);
  result.artifacts = {"projected.csv", "oracle.csv"};

  std::vector<std::string> coord_cols;
  for (const auto& c : coord_names(chart)) coord_cols.push_back(c);
  const CompareReport rep =
      compare_records(projected, oracle, cfg.number("check.tolerance"), coord_cols);
  double worst = 0.0;
  for (const auto& c : rep.columns) worst = std::max(worst, c.max_dev);
  result.checks.push_back(bounded_check("coupled_max_coordinate_deviation", worst,
                                        cfg.number("check.tolerance")));

  if (svg) {
    write_svg_plot((fs::path(dir) / "overlay.svg").string(),
                   {column_series(projected, "t", "a", "projected a"),
                    column_series(oracle, "t", "a", "oracle a"),
                    column_series(projected, "t", "phi_0", "projected phi_0"),
                    column_series(oracle, "t", "phi_0", "oracle phi_0")},
                   {"coupled particle-field trajectories", "t", "coordinate"});
    result.artifacts.push_back("overlay.svg");
  }
  return result;
}

// ------------------------------------------------------- width-scaling ----

const std::vector<std::pair<std::string, std::string>> kWidthDefaults = {
    {"particle.a", "1.0"},
    {"particle.mass", "1.0"},
    {"potential.v", "[0, 0, 0, 0, 0.25]"},
    {"scan.sigmas", "[0.1, 0.14, 0.2, 0.28, 0.4]"},
    {"scan.kernels", "[1.0, 4.0]"},
    {"scan.quartic", "0.4"},
    {"scan.phi", "0.8"},
    {"grid.particle.n", "2048"},
    {"grid.field.n", "1024"},
    {"grid.field.span", "6.6"},
};

ExperimentResult run_width_scaling(Config& cfg, const std::string& dir, bool svg) {
  apply_defaults(cfg, kWidthDefaults);
  const double a = cfg.number("particle.a");
  const double mass = positive_number(cfg, "particle.mass");
  const Polynomial v = read_poly(cfg, "potential.v");
  const Polynomial dv = v.derivative();
  const std::vector<double> sigmas = cfg.list("scan.sigmas");
  const int n_grid = cfg.integer("grid.particle.n");
  (void)cfg.number_or("grid.field.margin", 0.0);

  // Particle branch: projected force vs the bare classical force -V'(a).
  for (const double sigma : sigmas)
    if (!(sigma > 0.0)) throw ConfigError("key 'scan.sigmas': widths must be positive");
  const std::vector<ScanPoint> points =
      scan_force_deviation<ParticleChart>(sigmas, [&](double sigma) {
        const ParticleChart c{a, 0.0, sigma, mass};
        const GridPtr grid = particle_grid(c, n_grid, 1.0);
        return ScanCase<ParticleChart>{c, particle_hamiltonian(grid, mass, v), grid, -dv(a), 1};
      });
  TrajectoryRecord particle_scan;
  particle_scan.columns = {"index", "sigma", "deviation"};
  for (std::size_t i = 0; i < points.size(); ++i)
    particle_scan.rows.push_back({static_cast<double>(i), points[i].width, points[i].deviation});
  const double ratio =
      points.front().deviation > 0.0
          ? points[2].deviation / points.front().deviation  // sigma vs sigma/2
          : 0.0;
  const double slope = loglog_slope(points);

  // Field branch: two-kernel comparison with a quartic self term; the
  // projected restoring force deviates from the classical one by
  // 3 lambda phi / (2K).
  const std::vector<double> kernels = cfg.list("scan.kernels");
  if (kernels.size() < 2) throw ConfigError("key 'scan.kernels': need two kernel values");
  const double lambda = positive_number(cfg, "scan.quartic");
  const double phi0 = cfg.number("scan.phi");
  TrajectoryRecord field_scan;
  field_scan.columns = {"index", "kernel", "width_sq", "deviation"};
  std::vector<double> field_devs;
  for (const double k : kernels) {
    FieldChart c;
    c.phi_c = RVector::Constant(1, phi0);
    c.pi_c = RVector::Zero(1);
    c.kernel = RMatrix::Constant(1, 1, k);
    c.h = 1.0;
    c.m = 1.0;
    // Static chart: center the axis on phi0 rather than on the origin.
    const GridPtr grid = field_grid(c, cfg.integer("grid.field.n"),
                                    positive_number(cfg, "grid.field.span"));
    const HamiltonianSpec h = field_hamiltonian(grid, c, {}, lambda);
    const ProjectedFlow flow = project_flow(c, h, 0.0, grid);
    const double bare = -c.m * c.m * phi0 - lambda * phi0 * phi0 * phi0;
    const double dev = std::abs(flow.chart_velocity[1] - bare);
    field_devs.push_back(dev);
    field_scan.rows.push_back(
        {static_cast<double>(field_devs.size() - 1), k, 1.0 / (2.0 * k), dev});
  }
  const double field_ratio = field_devs[0] / field_devs[1];
  const double kernel_ratio = kernels[1] / kernels[0];

  ExperimentResult result;
  CsvMetadata md = base_metadata(cfg, "width-scaling");
  write_csv((fs::path(dir) / "particle_scan.csv").string(), particle_scan, md);
  write_csv((fs::path(dir) / "field_scan.csv").string(), field_scan, md);
  result.artifacts = {"particle_scan.csv", "field_scan.csv"};

  result.checks.push_back(range_check("width_scaling_particle_ratio", ratio, 3.5, 4.5));
  result.checks.push_back(range_check("width_scaling_particle_slope", slope, 1.8, 2.2));
  result.checks.push_back(
      range_check("width_scaling_field_ratio", field_ratio, kernel_ratio - 0.5, kernel_ratio + 0.5));

  if (svg) {
    Series s;
    s.label = "force deviation";
    for (const auto& p : points) {
      s.x.push_back(p.width);
      s.y.push_back(p.deviation);
    }
    PlotOptions po{"force-law deviation vs localization width", "sigma", "deviation"};
    po.log_x = true;
    po.log_y = true;
    write_svg_plot((fs::path(dir) / "scaling.svg").string(), {s}, po);
    result.artifacts.push_back("scaling.svg");
  }
  return result;
}

// ------------------------------------------------------------- em-mode ----

const std::vector<std::pair<std::string, std::string>> kEmDefaults = {
    {"particle.a", "0.0015"},  {"particle.p", "0.0"},
    {"particle.sigma", "0.5"}, {"particle.mass", "1.0"},
    {"em.q", "0.05"},
    {"em.potential", "[0, 0, 0.5]"},
    {"em.modes.k", "[1.3]"},   {"em.modes.A", "[0.002]"},
    {"em.modes.Pi", "[0.0]"},  {"em.modes.u", "[1.0]"},
    {"grid.particle.n", "192"},
    {"grid.particle.halfwidth", "4.8"},
    {"grid.mode.n", "128"},    {"grid.mode.span", "6.3"},
    {"grid.mode.margin", "0.02"},
    {"run.t_end", "10.0"},     {"run.dt", "0.004"},
    {"run.sample_stride", "25"},
    {"oracle.dt", "0.0005"},
    {"check.tolerance", "1e-4"},
};

ExperimentResult run_em_mode(Config& cfg, const std::string& dir, bool svg) {
  apply_defaults(cfg, kEmDefaults);
  EMModeChart chart;
  {
    const ParticleChart pc = read_particle(cfg);
    chart.a = pc.a;
    chart.p = pc.p;
    chart.sigma = pc.sigma;
    chart.mass = pc.mass;
  }
  chart.q = cfg.number("em.q");
  chart.potential = read_poly(cfg, "em.potential");
  const std::vector<double> ks = cfg.list("em.modes.k");
  const std::vector<double> as = cfg.list("em.modes.A");
  const std::vector<double> pis = cfg.list("em.modes.Pi");
  const std::vector<double> us = cfg.list("em.modes.u");
  if (as.size() != ks.size() || pis.size() != ks.size() || us.size() != ks.size())
    throw ConfigError("em.modes.*: k, A, Pi, u must have equal lengths");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0.0)) throw ConfigError("key 'em.modes.k': wavenumbers must be positive");
    chart.modes.push_back(EMMode{ks[i], as[i], pis[i], us[i], 0.0});
  }

  std::vector<GridAxis> axes = {symmetric_axis(
      "x", positive_number(cfg, "grid.particle.halfwidth"), cfg.integer("grid.particle.n"))};
  const int nm = cfg.integer("grid.mode.n");
  const double span = positive_number(cfg, "grid.mode.span");
  const double margin = cfg.number("grid.mode.margin");
  for (std::size_t i = 0; i < chart.modes.size(); ++i)
    axes.push_back(symmetric_axis("q_" + std::to_string(i),
                                  span / std::sqrt(chart.modes[i].width()) + margin, nm));
  const GridPtr grid = make_grid(std::move(axes));
  const HamiltonianSpec h = em_hamiltonian(grid, chart);

  IntegrateOptions opt;
  opt.dt = positive_number(cfg, "run.dt");
  opt.t_end = positive_number(cfg, "run.t_end");
  opt.sample_stride = cfg.integer("run.sample_stride");
  const TrajectoryRecord projected = integrate_chart(chart, h, grid, opt);

  EMParams ep;
  ep.mass = chart.mass;
  ep.q = chart.q;
  ep.potential = chart.potential;
  ep.modes = chart.modes;
  ClassicalState s0;
  s0.a = chart.a;
  s0.p = chart.p;
  s0.phi = RVector(static_cast<Eigen::Index>(chart.modes.size()));
  s0.pi = RVector(static_cast<Eigen::Index>(chart.modes.size()));
  for (std::size_t i = 0; i < chart.modes.size(); ++i) {
    s0.phi[static_cast<Eigen::Index>(i)] = chart.modes[i].A;
    s0.pi[static_cast<Eigen::Index>(i)] = chart.modes[i].Pi;
  }
  const double odt = positive_number(cfg, "oracle.dt");
  const TrajectoryRecord oracle =
      run_em(s0, ep, odt, opt.t_end,
             std::max(1, static_cast<int>(std::llround(opt.dt * opt.sample_stride / odt))));

  ExperimentResult result;
  CsvMetadata md = base_metadata(cfg, "em-mode");
  write_csv((fs::path(dir) / "projected.csv").string(), projected, md);
  write_csv((fs::path(dir) / "oracle.csv").string(), oracle, md);
  result.artifacts = {"projected.csv", "oracle.csv"};

  std::vector<std::string> coord_cols;
  for (const auto& c : coord_names(chart)) coord_cols.push_back(c);
  const CompareReport rep =
      compare_records(projected, oracle, cfg.number("check.tolerance"), coord_cols);
  double worst = 0.0;
  for (const auto& c : rep.columns) worst = std::max(worst, c.max_dev);
  result.checks.push_back(
      bounded_check("em_max_coordinate_deviation", worst, cfg.number("check.tolerance")));

  // Pointwise agreement of the two flow computations along the trajectory.
  double flow_gap = 0.0;
  for (std::size_t s = 0; s < projected.rows.size(); s += std::max<std::size_t>(1, projected.rows.size() / 8)) {
    RVector y(static_cast<Eigen::Index>(coord_cols.size()));
    for (std::size_t i = 0; i < coord_cols.size(); ++i)
      y[static_cast<Eigen::Index>(i)] = projected.rows[s][1 + i];
    const EMModeChart at = with_coords(chart, y);
    const double t = projected.rows[s][0];
    const ProjectedFlow flow = project_flow(at, h, t, grid);
    const RVector ehr = ehrenfest_flow(em_state(at, grid), h, t, at);
    flow_gap = std::max(flow_gap, (flow.chart_velocity - ehr).cwiseAbs().maxCoeff());
  }
  result.checks.push_back(
      bounded_check("em_projection_vs_ehrenfest", flow_gap, cfg.number("check.tolerance")));

  if (svg) {
    write_svg_plot((fs::path(dir) / "overlay.svg").string(),
                   {column_series(projected, "t", "A_0", "projected A_0"),
                    column_series(oracle, "t", "A_0", "oracle A_0"),
                    column_series(projected, "t", "a", "projected a"),
                    column_series(oracle, "t", "a", "oracle a")},
                   {"mode sector vs classical integrator", "t", "coordinate"});
    result.artifacts.push_back("overlay.svg");
  }
  return result;
}

// -------------------------------------------------------------- rm-walk ----

const std::vector<std::pair<std::string, std::string>> kRmDefaults = {
    {"particle.a", "1.0"},      {"particle.p", "0.0"},
    {"particle.sigma", "0.7071067811865476"},
    {"particle.mass", "1.0"},
    {"potential.v", "[0, 0, 0.5]"},
    {"grid.particle.n", "160"}, {"grid.particle.halfwidth", "9.0"},
    {"rm.subspace", "64"},      {"rm.v", "1.0"},
    {"rm.lambda", "0.0025"},    {"rm.tau", "1.0"},
    {"rm.nu", "20.0"},          {"rm.epsilon", "0.1"},
    {"rm.recording", "contrast"},
    {"rm.recording_rate", "0.0"},
    {"rm.walkers", "100"},
    {"ensemble.threads", "1"},
    {"run.t_end", "10.0"},      {"run.record_dt", "0.02"},
    {"seed", "20240601"},
    {"check.contrast", "0.3"},  {"check.residence", "0.9"},
};

RecordingPolicy parse_policy(const std::string& s) {
  if (s == "off") return RecordingPolicy::off;
  if (s == "on-entry") return RecordingPolicy::on_entry;
  if (s == "at-rate") return RecordingPolicy::at_rate;
  throw ConfigError("key 'rm.recording': expected off|on-entry|at-rate|contrast, got '" + s + "'");
}

TrajectoryRecord walk_to_record(const WalkRecord& rec) {
  TrajectoryRecord out;
  out.columns = {"t", "d_fs", "event", "a", "p", "a_oracle", "p_oracle"};
  for (const auto& s : rec.samples)
    out.rows.push_back({s.t, s.d_fs, static_cast<double>(s.events), s.a, s.p, s.a_oracle,
                        s.p_oracle});
  return out;
}

TrajectoryRecord summaries_to_record(const std::vector<WalkSummary>& sums, double policy_tag) {
  TrajectoryRecord out;
  out.columns = {"walker",       "policy",     "residence_fraction", "median_d_fs",
                 "mean_sojourn", "excursions", "max_chart_deviation"};
  for (std::size_t i = 0; i < sums.size(); ++i)
    out.rows.push_back({static_cast<double>(i), policy_tag, sums[i].residence_fraction,
                        sums[i].median_d_fs, sums[i].mean_sojourn,
                        static_cast<double>(sums[i].excursions), sums[i].max_chart_deviation});
  return out;
}

ExperimentResult run_rm_experiment(Config& cfg, const std::string& dir, bool svg) {
  apply_defaults(cfg, kRmDefaults);
  const ParticleChart chart = read_particle(cfg);
  const Polynomial v = read_poly(cfg, "potential.v");
  const GridPtr grid = make_grid({symmetric_axis(
      "x", positive_number(cfg, "grid.particle.halfwidth"), cfg.integer("grid.particle.n"))});
  const HamiltonianSpec h = particle_hamiltonian(grid, chart.mass, v);
  NewtonParams oracle;
  oracle.mass = chart.mass;
  oracle.v = v;

  RMConfig rm;
  rm.subspace_dim = cfg.integer("rm.subspace");
  rm.v = positive_number(cfg, "rm.v");
  rm.lambda = cfg.number("rm.lambda");
  rm.tau = positive_number(cfg, "rm.tau");
  rm.nu = positive_number(cfg, "rm.nu");
  rm.epsilon = positive_number(cfg, "rm.epsilon");
  rm.recording_rate = cfg.number("rm.recording_rate");
  rm.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  const int walkers = cfg.integer("rm.walkers");
  const int threads = cfg.integer("ensemble.threads");
  const double record_dt = positive_number(cfg, "run.record_dt");
  const double t_end = positive_number(cfg, "run.t_end");
  const std::string policy = cfg.text("rm.recording");

  ExperimentResult result;
  CsvMetadata md = base_metadata(cfg, "rm-walk");
  for (const auto& key : {"rm.subspace", "rm.v", "rm.lambda", "rm.tau", "rm.nu", "rm.epsilon",
                          "rm.recording", "rm.walkers"})
    md.add(key, cfg.text(key));

  if (policy == "contrast") {
    rm.recording = RecordingPolicy::off;
    std::vector<WalkRecord> recs_off;
    rm.validate();
    const auto off = run_rm_ensemble(chart, h, oracle, rm, walkers, record_dt, t_end, grid,
                                     &recs_off, threads);
    rm.recording = RecordingPolicy::on_entry;
    std::vector<WalkRecord> recs_on;
    const auto on = run_rm_ensemble(chart, h, oracle, rm, walkers, record_dt, t_end, grid,
                                    &recs_on, threads);

    double f_off = 0.0, f_on = 0.0, drift = 0.0;
    for (int i = 0; i < walkers; ++i) {
      f_off += off[static_cast<std::size_t>(i)].residence_fraction / walkers;
      f_on += on[static_cast<std::size_t>(i)].residence_fraction / walkers;
      drift = std::max(drift, recs_on[static_cast<std::size_t>(i)].norm_drift);
      drift = std::max(drift, recs_off[static_cast<std::size_t>(i)].norm_drift);
    }

    TrajectoryRecord summary = summaries_to_record(off, 0.0);
    const TrajectoryRecord on_rec = summaries_to_record(on, 1.0);
    summary.rows.insert(summary.rows.end(), on_rec.rows.begin(), on_rec.rows.end());
    write_csv((fs::path(dir) / "ensemble.csv").string(), summary, md);
    write_csv((fs::path(dir) / "walker0_off.csv").string(), walk_to_record(recs_off[0]), md);
    write_csv((fs::path(dir) / "walker0_on.csv").string(), walk_to_record(recs_on[0]), md);
    result.artifacts = {"ensemble.csv", "walker0_off.csv", "walker0_on.csv"};

    CheckResult contrast;
    contrast.name = "rm_residence_contrast";
    contrast.pass = (f_on - f_off) > cfg.number("check.contrast");
    contrast.detail = "on " + format_double(f_on) + " - off " + format_double(f_off) + " = " +
                      format_double(f_on - f_off);
    result.checks.push_back(contrast);
    CheckResult residence;
    residence.name = "rm_recording_residence_fraction";
    residence.pass = f_on > cfg.number("check.residence");
    residence.detail = format_double(f_on);
    result.checks.push_back(residence);
    result.checks.push_back(bounded_check("rm_norm_drift", drift, 1e-8));

    if (svg) {
      write_svg_plot((fs::path(dir) / "walk.svg").string(),
                     {column_series(walk_to_record(recs_off[0]), "t", "d_fs", "recording off"),
                      column_series(walk_to_record(recs_on[0]), "t", "d_fs", "recording on")},
                     {"distance to the chart family, walker 0", "t", "d_fs"});
      result.artifacts.push_back("walk.svg");
    }
  } else {
    rm.recording = parse_policy(policy);
    rm.validate();
    std::vector<WalkRecord> recs;
    const auto sums =
        run_rm_ensemble(chart, h, oracle, rm, walkers, record_dt, t_end, grid, &recs, threads);
    write_csv((fs::path(dir) / "ensemble.csv").string(),
              summaries_to_record(sums, rm.recording == RecordingPolicy::off ? 0.0 : 1.0), md);
    write_csv((fs::path(dir) / "walker0.csv").string(), walk_to_record(recs[0]), md);
    result.artifacts = {"ensemble.csv", "walker0.csv"};
    double drift = 0.0;
    for (const auto& r : recs) drift = std::max(drift, r.norm_drift);
    result.checks.push_back(bounded_check("rm_norm_drift", drift, 1e-8));
    if (svg) {
      write_svg_plot((fs::path(dir) / "walk.svg").string(),
                     {column_series(walk_to_record(recs[0]), "t", "d_fs", "walker 0")},
                     {"distance to the chart family", "t", "d_fs"});
      result.artifacts.push_back("walk.svg");
    }
  }
  return result;
}

// ------------------------------------------------------------ gue-stats ----

const std::vector<std::pair<std::string, std::string>> kGueDefaults = {
    {"gue.n", "200"},      {"gue.samples", "100"},
    {"gue.v", "1.0"},      {"gue.kick_dim", "64"},
    {"gue.kicks", "1000"}, {"gue.lambda", "0.05"},
    {"seed", "318"},
    {"check.ks", "0.02"},  {"check.drift", "1e-8"},
};

ExperimentResult run_gue_stats(Config& cfg, const std::string& dir, bool svg) {
  apply_defaults(cfg, kGueDefaults);
  const int n = cfg.integer("gue.n");
  const int samples = cfg.integer("gue.samples");
  const double v = positive_number(cfg, "gue.v");
  Rng rng(static_cast<std::uint64_t>(cfg.integer("seed")));

  std::vector<double> eigs;
  eigs.reserve(static_cast<std::size_t>(n) * samples);
  for (int s = 0; s < samples; ++s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sample_gue(n, v, rng));
    for (int i = 0; i < n; ++i) eigs.push_back(es.eigenvalues()[i]);
  }
  const double radius = 2.0 * v * std::sqrt(static_cast<double>(n));
  const double ks = ks_statistic(eigs, [&](double x) { return semicircle_cdf(x, radius); });

  // Histogram against the semicircle density.
  const int bins = 60;
  TrajectoryRecord hist;
  hist.columns = {"index", "center", "empirical", "semicircle"};
  std::vector<int> counts(bins, 0);
  for (double e : eigs) {
    int b = static_cast<int>((e + radius) / (2.0 * radius) * bins);
    b = std::clamp(b, 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  const double bin_w = 2.0 * radius / bins;
  for (int b = 0; b < bins; ++b) {
    const double center = -radius + (b + 0.5) * bin_w;
    hist.rows.push_back({static_cast<double>(b), center,
                         counts[static_cast<std::size_t>(b)] / (eigs.size() * bin_w),
                         semicircle_pdf(center, radius)});
  }

  // Unitarity of repeated kicks on a packet.
  const int kick_dim = cfg.integer("gue.kick_dim");
  const ParticleChart pc{0.0, 0.0, 0.5, 1.0};
  const GridPtr grid = particle_grid(pc, kick_dim);
  QuantumState psi = particle_state(pc, grid);
  const double lambda = cfg.number("gue.lambda");
  double drift = 0.0;
  for (int k = 0; k < cfg.integer("gue.kicks"); ++k) {
    psi = kick(psi, sample_gue(kick_dim, v, rng), lambda, 1.0);
    drift = std::max(drift, std::abs(psi.norm() - 1.0));
  }

  ExperimentResult result;
  CsvMetadata md = base_metadata(cfg, "gue-stats");
  md.add("gue.n", cfg.text("gue.n"));
  md.add("gue.samples", cfg.text("gue.samples"));
  write_csv((fs::path(dir) / "spectrum.csv").string(), hist, md);
  TrajectoryRecord summary;
  summary.columns = {"index", "ks_statistic", "kick_norm_drift"};
  summary.rows.push_back({0.0, ks, drift});
  write_csv((fs::path(dir) / "summary.csv").string(), summary, md);
  result.artifacts = {"spectrum.csv", "summary.csv"};

  result.checks.push_back(bounded_check("gue_semicircle_ks", ks, cfg.number("check.ks")));
  result.checks.push_back(bounded_check("gue_kick_norm_drift", drift, cfg.number("check.drift")));

  if (svg) {
    Series emp = column_series(hist, "center", "empirical", "empirical");
    Series ref = column_series(hist, "center", "semicircle", "semicircle");
    write_svg_plot((fs::path(dir) / "spectrum.svg").string(), {emp, ref},
                   {"eigenvalue density vs semicircle", "eigenvalue", "density"});
    result.artifacts.push_back("spectrum.svg");
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(Config cfg, const std::string& out_dir, bool emit_svg) {
  const std::string experiment = cfg.text("experiment");
  cfg.set("experiment", experiment);
  cfg.set("output.svg", emit_svg ? "true" : "false");
  (void)cfg.flag_or("output.svg", true);
  if (cfg.has("output.dir")) (void)cfg.text("output.dir");

  fs::create_directories(out_dir);

  ExperimentResult result;
  if (experiment == "kg-projection")
    result = run_kg_projection(cfg, out_dir, emit_svg);
  else if (experiment == "coupled")
    result = run_coupled_experiment(cfg, out_dir, emit_svg);
  else if (experiment == "width-scaling")
    result = run_width_scaling(cfg, out_dir, emit_svg);
  else if (experiment == "em-mode")
    result = run_em_mode(cfg, out_dir, emit_svg);
  else if (experiment == "rm-walk")
    result = run_rm_experiment(cfg, out_dir, emit_svg);
  else if (experiment == "gue-stats")
    result = run_gue_stats(cfg, out_dir, emit_svg);
  else
    throw ConfigError("key 'experiment': unknown experiment '" + experiment + "'");

  const std::vector<std::string> unknown = cfg.untouched_keys();
  if (!unknown.empty()) {
    std::string msg = "unknown configuration keys:";
    for (const auto& k : unknown)
      msg += " '" + k + "' (line " + std::to_string(cfg.line_of(k)) + ")";
    throw ConfigError(msg);
  }

  write_manifest(cfg, out_dir);
  result.artifacts.push_back("manifest.cfg");
  return result;
}

}  // namespace tangentlab::diag
