#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tangentlab/charts.hpp>
#include <tangentlab/random_matrix.hpp>
#include <tangentlab/state.hpp>

#include "oracles.hpp"

using namespace tangentlab;

namespace {

QuantumState random_state(const GridPtr& g, Rng& rng) {
  CVector v(static_cast<Eigen::Index>(g->total_points()));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = Complex(rng.normal(), rng.normal());
  return QuantumState(g, std::move(v)).normalized();
}

}  // namespace

TEST_CASE("grid axis invariants") {
  CHECK_THROWS_AS(make_grid({GridAxis{"x", -1.0, 1.0, 4}}), ConfigError);
  CHECK_THROWS_AS(make_grid({GridAxis{"x", 1.0, -1.0, 16}}), ConfigError);
  auto g = make_grid({symmetric_axis("x", 2.0, 9)});
  CHECK(g->axis(0).spacing() == doctest::Approx(0.5));
  CHECK(g->total_points() == 9);
}

TEST_CASE("grids beyond the point budget are rejected") {
  // Three 256-point axes would be 16M points, past the default budget.
  CHECK_THROWS_AS(make_grid({symmetric_axis("a", 1.0, 256), symmetric_axis("b", 1.0, 256),
                             symmetric_axis("c", 1.0, 256)}),
                  ConfigError);
}

TEST_CASE("multi-axis flattening is row-major with axis 0 slowest") {
  auto g = make_grid({symmetric_axis("x", 1.0, 8), symmetric_axis("y", 2.0, 16)});
  CHECK(g->stride(0) == 16);
  CHECK(g->stride(1) == 1);
  const std::size_t flat = 3 * 16 + 5;
  CHECK(g->index_along(flat, 0) == 3);
  CHECK(g->index_along(flat, 1) == 5);
  CHECK(g->coord(flat, 1) == doctest::Approx(g->axis(1).point(5)));
  CHECK(g->measure() == doctest::Approx(g->axis(0).spacing() * g->axis(1).spacing()));
}

TEST_CASE("inner product basics") {
  const ParticleChart c{0.0, 0.0, 0.5, 1.0};
  auto g = particle_grid(c, 256);
  const QuantumState psi = particle_state(c, g);

  SUBCASE("normalized state has unit self-inner product") {
    const Complex v = inner(psi, psi);
    CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-12);
  }

  SUBCASE("linearity in the second argument") {
    const Complex v = inner(psi, psi.scaled(Complex(0.0, 1.0)));
    CHECK(std::abs(v - Complex(0.0, 1.0) * psi.norm_squared()) < 1e-12);
  }

  SUBCASE("conjugate symmetry on random states") {
    Rng rng(7);
    const QuantumState a = random_state(g, rng), b = random_state(g, rng);
    const Complex lhs = inner(a, b), rhs = std::conj(inner(b, a));
    CHECK(std::abs(lhs - rhs) < 1e-14);
  }

  SUBCASE("grid mismatch is a structural error") {
    auto g2 = make_grid({symmetric_axis("x", 5.0, 128)});
    const QuantumState other = particle_state(c, g2);
    CHECK_THROWS_AS(inner(psi, other), GridMismatchError);
  }
}

TEST_CASE("Gaussian momentum-shift overlap against quadrature") {
  // Same-center packets with momenta p and p'.  The closed form under the
  // density-variance width convention is |<.|.>| = exp(-sigma^2 dp^2 / 2);
  // quadrature pins the value, the grid inner product must agree.
  const double sigma = 0.5, p1 = 0.7, p2 = 2.1;
  const std::complex<double> ref = oracle::packet_overlap(0.0, p1, 0.0, p2, sigma);
  const double closed = std::exp(-sigma * sigma * (p1 - p2) * (p1 - p2) / 2.0);
  CHECK(std::abs(ref) == doctest::Approx(closed).epsilon(1e-10));

  auto g = make_grid({symmetric_axis("x", 6.0, 2048)});
  const QuantumState a = particle_state({0.0, p1, sigma, 1.0}, g);
  const QuantumState b = particle_state({0.0, p2, sigma, 1.0}, g);
  CHECK(std::abs(inner(a, b)) == doctest::Approx(std::abs(ref)).epsilon(1e-8));
}

TEST_CASE("expectation values on a packet") {
  SUBCASE("position is exact by symmetry") {
    const ParticleChart c{1.25, 0.0, 0.5, 1.0};
    auto g = particle_grid(c, 512);
    const QuantumState psi = particle_state(c, g);
    CHECK(std::abs(expect_position(psi, 0) - 1.25) < 1e-8);
  }
  SUBCASE("stencil momentum converges to the phase gradient") {
    // The central-difference estimator carries an O((p h)^2) bias, so the
    // 1e-6 contract needs a fine axis.
    const ParticleChart c{1.0, 3.0, 0.5, 1.0};
    auto g = make_grid({GridAxis{"x", -4.0, 6.0, 40000}});
    const QuantumState psi = particle_state(c, g);
    CHECK(std::abs(expect_momentum(psi, 0) - 3.0) < 1e-6);
    CHECK(std::abs(phase_gradient(psi, 0) - 3.0) < 1e-9);
  }
}

TEST_CASE("fubini_study distance") {
  const ParticleChart c{0.0, 0.0, 0.5, 1.0};
  auto g = particle_grid(c, 384);
  const QuantumState psi = particle_state(c, g);

  SUBCASE("projective invariance") {
    const QuantumState rotated = psi.scaled(std::polar(1.0, 1.234));
    CHECK(fubini_study(psi, rotated) < 1e-7);
    const QuantumState scaled = psi.scaled(Complex(0.3, -1.7));
    CHECK(fubini_study(psi, scaled) < 1e-7);
  }

  SUBCASE("orthogonal states sit at pi/2") {
    // Ground and first excited oscillator states are orthogonal by parity.
    CVector odd(static_cast<Eigen::Index>(g->total_points()));
    for (std::size_t j = 0; j < g->total_points(); ++j) {
      const double x = g->coord(j, 0);
      odd[static_cast<Eigen::Index>(j)] = x * std::exp(-x * x);
    }
    const QuantumState excited = QuantumState(g, std::move(odd)).normalized();
    CHECK(fubini_study(psi, excited) == doctest::Approx(oracle::kPi / 2).epsilon(1e-10));
  }

  SUBCASE("small position displacement expands as delta/(2 sigma)") {
    // Analytic overlap exp(-d^2/(8 s^2)) gives d_FS = delta/(2s) + O(delta^3).
    const double delta = 1e-3, sigma = 0.5;
    const double analytic = std::acos(std::exp(-delta * delta / (8 * sigma * sigma)));
    CHECK(analytic == doctest::Approx(delta / (2 * sigma)).epsilon(1e-6));
    const QuantumState shifted = particle_state({delta, 0.0, sigma, 1.0}, g);
    CHECK(fubini_study(psi, shifted) == doctest::Approx(delta / (2 * sigma)).epsilon(1e-5));
  }

  SUBCASE("zero state is rejected") {
    const QuantumState zero(g, CVector::Zero(static_cast<Eigen::Index>(g->total_points())));
    CHECK_THROWS_AS(fubini_study(psi, zero), NumericalError);
  }

  SUBCASE("triangle inequality on random triples") {
    auto gs = make_grid({symmetric_axis("x", 1.0, 24)});
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
      const QuantumState a = random_state(gs, rng);
      const QuantumState b = random_state(gs, rng);
      const QuantumState c3 = random_state(gs, rng);
      CHECK(fubini_study(a, c3) <= fubini_study(a, b) + fubini_study(b, c3) + 1e-9);
    }
  }
}
