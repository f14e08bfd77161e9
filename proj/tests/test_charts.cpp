#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tangentlab/charts.hpp>
#include <tangentlab/systems.hpp>

#include "oracles.hpp"

using namespace tangentlab;

namespace {

FieldChart single_site(double k = 1.0, double phi = 0.0, double pi = 0.0) {
  FieldChart c;
  c.phi_c = RVector::Constant(1, phi);
  c.pi_c = RVector::Constant(1, pi);
  c.kernel = RMatrix::Constant(1, 1, k);
  c.h = 1.0;
  c.m = 1.0;
  return c;
}

}  // namespace

TEST_CASE("particle packet moments match the width convention") {
  const ParticleChart c{0.0, 0.0, 0.5, 1.0};
  auto g = particle_grid(c, 512);
  const QuantumState psi = particle_state(c, g);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  CHECK(std::abs(expect_position(psi, 0)) < 1e-10);

  RVector x2(static_cast<Eigen::Index>(g->total_points()));
  for (std::size_t j = 0; j < g->total_points(); ++j) {
    const double x = g->coord(j, 0);
    x2[static_cast<Eigen::Index>(j)] = x * x;
  }
  CHECK(expect_diagonal(psi, x2) == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("packet momentum expectation reaches the chart value") {
  const ParticleChart c{1.0, 3.0, 0.5, 1.0};
  auto g = make_grid({GridAxis{"x", -4.5, 6.5, 40000}});
  const QuantumState psi = particle_state(c, g);
  CHECK(std::abs(expect_momentum(psi, 0) - 3.0) < 1e-6);
}

TEST_CASE("packet tails and clipping") {
  const ParticleChart c{0.0, 0.0, 0.5, 1.0};
  auto g = particle_grid(c, 512);
  const QuantumState psi = particle_state(c, g);
  const CVector& a = psi.amplitudes();
  const double peak = a.cwiseAbs().maxCoeff();
  CHECK(std::abs(a[0]) < 1e-8 * peak);
  CHECK(std::abs(a[a.size() - 1]) < 1e-8 * peak);

  auto tight = make_grid({symmetric_axis("x", 2.0, 64)});
  CHECK_THROWS_AS(particle_state(c, tight), DomainError);
}

TEST_CASE("single-mode field state is the oscillator ground state") {
  const FieldChart c = single_site();
  auto g = field_grid(c, 384);
  const QuantumState psi = field_state(c, g);
  const HamiltonianSpec h = field_hamiltonian(g, c);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  CHECK(expect_energy(h, psi) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("two-site field state centers at phi_c") {
  FieldChart c;
  c.phi_c = RVector(2);
  c.phi_c << 1.0, -1.0;
  c.pi_c = RVector::Zero(2);
  c.kernel = RMatrix::Identity(2, 2);
  c.kernel(1, 1) = 2.0;
  c.h = 1.0;
  c.m = 1.0;
  auto g = field_grid(c, 96);
  const QuantumState psi = field_state(c, g);
  CHECK(std::abs(expect_position(psi, 0) - 1.0) < 1e-8);
  CHECK(std::abs(expect_position(psi, 1) + 1.0) < 1e-8);
}

TEST_CASE("field momentum coordinate uses the site-measure convention") {
  // With spacing h the builder phase is h pi_c phi, so pi_c is recovered
  // from the phase gradient divided by h.
  FieldChart c = single_site(1.0, 0.0, 2.0);
  c.h = 0.5;
  auto g = make_grid({GridAxis{"phi_0", -14.0, 14.0, 30000}});
  const QuantumState psi = field_state(c, g);
  CHECK(std::abs(expect_momentum(psi, 0) / c.h - 2.0) < 1e-6);
  CHECK(std::abs(phase_gradient(psi, 0) / c.h - 2.0) < 1e-9);
}

TEST_CASE("field kernel must be positive definite") {
  FieldChart c;
  c.phi_c = RVector::Zero(2);
  c.pi_c = RVector::Zero(2);
  c.kernel = RMatrix::Identity(2, 2);
  c.kernel(0, 0) = -1.0;
  auto g = make_grid({symmetric_axis("phi_0", 6.5, 32), symmetric_axis("phi_1", 6.5, 32)});
  CHECK_THROWS_AS(field_state(c, g), DomainError);
}

TEST_CASE("product state factorizes") {
  ProductChart pc;
  pc.particle = {0.3, 0.0, 0.4, 1.0};
  pc.field = single_site(1.0, 0.7, 0.0);
  auto g = product_grid(pc, 128, 96);
  const QuantumState psi = product_state(pc, g);

  SUBCASE("unit norm") { CHECK(std::abs(psi.norm() - 1.0) < 1e-8); }

  SUBCASE("cross moments factorize") {
    RVector xphi(static_cast<Eigen::Index>(g->total_points()));
    for (std::size_t j = 0; j < g->total_points(); ++j)
      xphi[static_cast<Eigen::Index>(j)] = g->coord(j, 0) * g->coord(j, 1);
    const double joint = expect_diagonal(psi, xphi);
    const double split = expect_position(psi, 0) * expect_position(psi, 1);
    CHECK(std::abs(joint - split) < 1e-8);
  }

  SUBCASE("distance to a field-shifted product equals the factor distance") {
    ProductChart shifted = pc;
    shifted.field.phi_c[0] = 1.0;
    const QuantumState psi2 = product_state(shifted, g);
    const double product_distance = fubini_study(psi, psi2);

    std::vector<GridAxis> faxes = {g->axis(1)};
    auto fg = make_grid(std::move(faxes));
    const double factor_distance =
        fubini_study(field_state(pc.field, fg), field_state(shifted.field, fg));
    CHECK(std::abs(product_distance - factor_distance) < 1e-8);
  }
}

TEST_CASE("em state moments") {
  EMModeChart em;
  em.a = 0.2;
  em.p = 0.0;
  em.sigma = 0.5;
  em.modes = {EMMode{1.0, 0.4, 0.0, 1.0, 0.0}, EMMode{2.0, -0.1, 0.0, 1.0, 0.0}};
  auto g = em_grid(em, 96, 64);
  const QuantumState psi = em_state(em, g);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
  CHECK(std::abs(expect_position(psi, 0) - 0.2) < 1e-8);
  CHECK(std::abs(expect_position(psi, 1) - 0.4) < 1e-8);
  CHECK(std::abs(expect_position(psi, 2) + 0.1) < 1e-8);
}

TEST_CASE("rho_sigma is a unit-mass density with the advertised moments") {
  const double a = 0.4, sigma = 0.5;
  const GridAxis axis = symmetric_axis("x", 8.0, 4096, a);
  const RVector rho = rho_sigma(a, sigma, axis);
  const double h = axis.spacing();

  double mass = 0.0, mean = 0.0, second = 0.0;
  for (int i = 0; i < axis.n; ++i) {
    const double x = axis.point(i);
    mass += rho[i] * h;
    mean += rho[i] * x * h;
    second += rho[i] * x * x * h;
  }
  CHECK(std::abs(mass - 1.0) < 1e-8);
  CHECK(std::abs(mean - a) < 1e-8);
  // Density variance equals sigma^2 under the width convention; the
  // quadrature oracle fixes the same value.
  const double var_oracle =
      oracle::gaussian_mean([&](double x) { return (x - a) * (x - a); }, a, sigma);
  CHECK(var_oracle == doctest::Approx(sigma * sigma).epsilon(1e-9));
  CHECK(std::abs((second - mean * mean / mass) - sigma * sigma) < 1e-6);
}

TEST_CASE("rho_sigma acts as a delta family with O(sigma^2) corrections") {
  auto sample_against = [&](double sigma) {
    const GridAxis axis = symmetric_axis("x", 6.0, 8192);
    const RVector rho = rho_sigma(0.5, sigma, axis);
    double acc = 0.0;
    for (int i = 0; i < axis.n; ++i) acc += rho[i] * std::cos(axis.point(i)) * axis.spacing();
    return std::abs(acc - std::cos(0.5));
  };
  const double dev1 = sample_against(0.2);
  const double dev2 = sample_against(0.1);
  CHECK(dev1 / dev2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("rho_sigma rejects clipped tails") {
  const GridAxis axis = symmetric_axis("x", 1.0, 64);
  CHECK_THROWS_AS(rho_sigma(0.0, 0.5, axis), DomainError);
}
