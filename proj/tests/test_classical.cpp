#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <tangentlab/classical.hpp>

#include "oracles.hpp"

using namespace tangentlab;

namespace {

ClassicalState field_state0(int n, double phi = 0.0, double pi = 0.0) {
  ClassicalState s;
  s.phi = RVector::Constant(n, phi);
  s.pi = RVector::Constant(n, pi);
  return s;
}

}  // namespace

TEST_CASE("single-site oscillator returns after one period") {
  KGParams p;
  p.sites = 1;
  ClassicalState s = field_state0(1, 1.0, 0.0);
  const int steps = 6283;  // dt ~ 1e-3 with steps * dt = 2 pi exactly
  const double dt = 2.0 * oracle::kPi / steps;
  for (int k = 0; k < steps; ++k) s = kg_step(s, p, dt);
  CHECK(std::abs(s.phi[0] - 1.0) < 1e-4);
  CHECK(std::abs(s.pi[0]) < 1e-4);
}

TEST_CASE("constant source holds the equilibrium configuration") {
  KGParams p;
  p.sites = 1;
  p.source_amplitude = RVector::Constant(1, 0.7);
  ClassicalState s = field_state0(1, 0.7, 0.0);  // phi = J/m^2
  for (int k = 0; k < 2000; ++k) s = kg_step(s, p, 1e-3);
  CHECK(std::abs(s.phi[0] - 0.7) < 1e-8);
  CHECK(std::abs(s.pi[0]) < 1e-8);
}

TEST_CASE("plane waves obey the lattice dispersion relation") {
  // Oracle: omega^2 = m^2 + (4/h^2) sin^2(k h / 2); the measured frequency
  // comes from zero crossings of the mode amplitude.
  const int n = 32;
  KGParams p;
  p.sites = n;
  p.h = 0.5;
  p.m = 1.0;
  const int mode = 3;
  const double k_wave = 2.0 * oracle::kPi * mode / (n * p.h);
  const double omega2_ref =
      p.m * p.m + (4.0 / (p.h * p.h)) * std::pow(std::sin(k_wave * p.h / 2.0), 2);

  ClassicalState s = field_state0(n);
  for (int i = 0; i < n; ++i) s.phi[i] = 0.1 * std::cos(k_wave * p.h * i);
  auto mode_amp = [&](const ClassicalState& st) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += st.phi[i] * std::cos(k_wave * p.h * i);
    return acc * 2.0 / n;
  };

  const double dt = 1e-3;
  double prev = mode_amp(s), t_first = 0.0, t_last = 0.0;
  int crossings = 0;
  for (int step = 1; step <= 40000; ++step) {
    s = kg_step(s, p, dt);
    const double cur = mode_amp(s);
    if (prev > 0.0 && cur <= 0.0) {
      const double t = (step - 1) * dt + dt * prev / (prev - cur);
      if (crossings == 0) t_first = t;
      t_last = t;
      ++crossings;
    }
    prev = cur;
  }
  REQUIRE(crossings >= 2);
  const double period = (t_last - t_first) / (crossings - 1);
  const double omega_meas = 2.0 * oracle::kPi / period;
  CHECK(omega_meas * omega_meas == doctest::Approx(omega2_ref).epsilon(0.01));
}

TEST_CASE("CFL violation is a configuration error") {
  KGParams p;
  p.sites = 4;
  p.h = 0.1;
  ClassicalState s = field_state0(4);
  CHECK_THROWS_AS(kg_step(s, p, 0.2), ConfigError);
}

TEST_CASE("kg leapfrog is time reversible") {
  KGParams p;
  p.sites = 8;
  p.h = 0.5;
  ClassicalState s0 = field_state0(8);
  for (int i = 0; i < 8; ++i) s0.phi[i] = std::sin(0.7 * i);
  ClassicalState s = s0;
  for (int k = 0; k < 1000; ++k) s = kg_step(s, p, 1e-2);
  for (int k = 0; k < 1000; ++k) s = kg_step(s, p, -1e-2);
  CHECK((s.phi - s0.phi).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((s.pi - s0.pi).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("kg energy error is bounded, not drifting") {
  KGParams p;
  p.sites = 16;
  p.h = 0.5;
  ClassicalState s = field_state0(16);
  for (int i = 0; i < 16; ++i) s.phi[i] = 0.3 * std::sin(0.9 * i);
  const double e0 = kg_energy(s, p);
  std::vector<double> ts, es;
  const double dt = 5e-3;
  for (int k = 0; k < 20000; ++k) {
    s = kg_step(s, p, dt);
    if (k % 100 == 0) {
      ts.push_back(s.t);
      es.push_back(kg_energy(s, p));
    }
  }
  const auto [slope, r2] = oracle::linear_fit(ts, es);
  (void)r2;
  CHECK(std::abs(slope) * 100.0 / std::abs(e0) < 1e-5);  // slope * T << e0
}

TEST_CASE("smeared force closed cases") {
  const int n = 401;
  const double h = 0.05, x0 = -10.0;

  SUBCASE("linear field gives exactly minus the slope") {
    RVector phi(n);
    for (int i = 0; i < n; ++i) phi[i] = 2.5 * (x0 + h * i);
    for (double sigma : {0.2, 0.5, 1.0})
      CHECK(smeared_force(0.3, sigma, phi, h, x0) == doctest::Approx(-2.5).epsilon(1e-10));
  }

  SUBCASE("constant field gives zero") {
    RVector phi = RVector::Constant(n, 4.2);
    CHECK(std::abs(smeared_force(0.1, 0.4, phi, h, x0)) < 1e-12);
  }

  SUBCASE("cubic field at the origin vanishes as sigma^2") {
    RVector phi(n);
    for (int i = 0; i < n; ++i) phi[i] = std::pow(x0 + h * i, 3);
    const double f1 = std::abs(smeared_force(0.0, 0.4, phi, h, x0));
    const double f2 = std::abs(smeared_force(0.0, 0.2, phi, h, x0));
    // Oracle: d/da E[(a+u)^3] = 3a^2 + 3 sigma^2 -> force -3 sigma^2 at a=0.
    CHECK(f1 == doctest::Approx(3 * 0.4 * 0.4).epsilon(1e-8));
    CHECK(f1 / f2 == doctest::Approx(4.0).epsilon(1e-6));
  }
}

TEST_CASE("coupled oracle") {
  CoupledParams cp;
  cp.particle.mass = 1.0;
  cp.particle.v = Polynomial{0.0, 0.0, 0.5};
  cp.field.sites = 16;
  cp.field.h = 0.5;
  cp.field.m = 1.0;
  cp.field.x0 = FieldChart::centered_origin(16, 0.5);
  cp.coupling_smear = 0.4;

  SUBCASE("g = 0 decouples the particle exactly") {
    cp.g = 0.0;
    ClassicalState s = field_state0(16);
    s.a = 0.7;
    s.p = -0.2;
    ClassicalState n = s;
    const double dt = 1e-3;
    for (int k = 0; k < 3000; ++k) {
      s = coupled_step(s, cp, dt);
      n = newton_step(n, cp.particle, dt);
    }
    CHECK(std::abs(s.a - n.a) < 1e-12);
    CHECK(std::abs(s.p - n.p) < 1e-12);
  }

  SUBCASE("a pinned heavy particle sources the screened lattice profile") {
    cp.g = 1.0;
    cp.particle.mass = 1e6;
    ClassicalState s = field_state0(16);
    // Damped settling: bleed field momentum each step until the static
    // profile remains, then compare with the direct linear solve
    // (-lap + m^2) phi = g rho.
    const double dt = 5e-3;
    for (int k = 0; k < 60000; ++k) {
      s = coupled_step(s, cp, dt);
      s.pi *= (1.0 - 5e-3);
    }
    RMatrix op = RMatrix::Zero(16, 16);
    for (int i = 0; i < 16; ++i) {
      op(i, i) = 2.0 / (cp.field.h * cp.field.h) + cp.field.m * cp.field.m;
      op(i, (i + 1) % 16) -= 1.0 / (cp.field.h * cp.field.h);
      op(i, (i + 15) % 16) -= 1.0 / (cp.field.h * cp.field.h);
    }
    RVector rho(16);
    for (int i = 0; i < 16; ++i)
      rho[i] = cp.g * rho_sigma_at(0.0, cp.coupling_smear, cp.field.site_position(i));
    const RVector ref = op.fullPivLu().solve(rho);
    CHECK((s.phi - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff() < 1e-2);
  }

  SUBCASE("total momentum is conserved on the periodic lattice at V = 0") {
    // The smearing width must stay well above the lattice spacing, or the
    // sampled density feels the lattice pinning and momentum leaks.
    CoupledParams mp = cp;
    mp.g = 0.8;
    mp.particle.v = Polynomial{};
    mp.field.sites = 48;
    mp.field.h = 0.25;
    mp.field.x0 = FieldChart::centered_origin(48, 0.25);
    mp.lattice_consistent_force = true;
    ClassicalState s = field_state0(48);
    s.a = 0.3;
    s.p = 0.5;
    const double p0 = coupled_total_momentum(s, mp);
    const double dt = 1e-3;
    double worst = 0.0;
    for (int k = 0; k < 5000; ++k) {
      s = coupled_step(s, mp, dt);
      worst = std::max(worst, std::abs(coupled_total_momentum(s, mp) - p0));
    }
    CHECK(worst < 1e-6);
  }

  SUBCASE("energy drift below 1e-4 relative over T = 10") {
    cp.g = 0.6;
    ClassicalState s = field_state0(16, 0.1, 0.0);
    s.a = 0.5;
    const double e0 = coupled_energy(s, cp);
    const double dt = 2e-3;
    double worst = 0.0;
    for (int k = 0; k < 5000; ++k) {
      s = coupled_step(s, cp, dt);
      worst = std::max(worst, std::abs(coupled_energy(s, cp) - e0));
    }
    CHECK(worst / std::abs(e0) < 1e-4);
  }
}

TEST_CASE("em mode oracle") {
  EMParams em;
  em.mass = 1.0;
  em.q = 0.0;
  em.modes = {EMMode{1.0, 0.0, 0.0, 1.0, 0.0}};

  SUBCASE("q = 0 single mode is an exact oscillator") {
    ClassicalState s = field_state0(1, 1.0, 0.0);
    const double dt = 1e-2;
    const int steps = 628;  // T = 6.28 ~ one period
    for (int k = 0; k < steps; ++k) s = em_mode_step(s, em, dt);
    // Mode rotation is exact; the only error is the period mismatch of the
    // discrete time grid.
    const double t = steps * dt;
    CHECK(s.phi[0] == doctest::Approx(std::cos(t)).epsilon(1e-10));
    CHECK(s.pi[0] == doctest::Approx(-std::sin(t)).epsilon(1e-10));
  }

  SUBCASE("a static particle with zero charge leaves the sectors decoupled") {
    em.potential = Polynomial{0.0, 0.0, 0.5};
    ClassicalState s = field_state0(1, 0.5, 0.0);
    s.a = 0.0;
    s.p = 0.0;
    for (int k = 0; k < 1000; ++k) s = em_mode_step(s, em, 1e-2);
    CHECK(std::abs(s.a) < 1e-12);
    CHECK(std::abs(s.p) < 1e-12);
  }

  SUBCASE("charged coupling conserves energy to 1e-4 over T = 10") {
    em.q = 0.2;
    em.potential = Polynomial{0.0, 0.0, 0.5};
    em.modes = {EMMode{1.0, 0.3, 0.0, 1.0, 0.0}, EMMode{2.3, -0.1, 0.2, 0.7, 0.0}};
    ClassicalState s;
    s.a = 0.4;
    s.p = 0.1;
    s.phi = RVector(2);
    s.phi << 0.3, -0.1;
    s.pi = RVector(2);
    s.pi << 0.0, 0.2;
    const double e0 = em_energy(s, em);
    const double dt = 2e-3;
    double worst = 0.0;
    for (int k = 0; k < 5000; ++k) {
      s = em_mode_step(s, em, dt);
      worst = std::max(worst, std::abs(em_energy(s, em) - e0));
    }
    CHECK(worst / std::abs(e0) < 1e-4);
  }

  SUBCASE("em stepping is time reversible") {
    em.q = 0.15;
    em.potential = Polynomial{0.0, 0.0, 0.5};
    ClassicalState s0;
    s0.a = 0.4;
    s0.p = 0.1;
    s0.phi = RVector::Constant(1, 0.3);
    s0.pi = RVector::Constant(1, -0.2);
    ClassicalState s = s0;
    for (int k = 0; k < 1000; ++k) s = em_mode_step(s, em, 5e-3);
    for (int k = 0; k < 1000; ++k) s = em_mode_step(s, em, -5e-3);
    CHECK(std::abs(s.a - s0.a) < 1e-8);
    CHECK(std::abs(s.p - s0.p) < 1e-8);
    CHECK(std::abs(s.phi[0] - s0.phi[0]) < 1e-8);
    CHECK(std::abs(s.pi[0] - s0.pi[0]) < 1e-8);
  }
}

TEST_CASE("trajectory records carry the shared column schema") {
  KGParams p;
  p.sites = 2;
  ClassicalState s = field_state0(2, 0.1, 0.0);
  const TrajectoryRecord rec = run_kg(s, p, 1e-2, 1.0, 10);
  CHECK(rec.columns ==
        std::vector<std::string>{"t", "phi_0", "phi_1", "pi_0", "pi_1", "energy"});
  CHECK(rec.rows.size() == 11);
  CHECK(rec.rows.front()[0] == 0.0);
  CHECK(rec.rows.back()[0] == doctest::Approx(1.0));
}
