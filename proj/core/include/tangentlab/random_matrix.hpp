#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "tangentlab/state.hpp"

namespace tangentlab {

// Deterministic random source with hand-rolled transforms, so that a seed
// reproduces identical streams across standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {  // standard normal, Box-Muller with cached spare
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 of seed xor stream tag
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ull * (stream + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Hermitian matrix drawn from the Gaussian Unitary Ensemble with density
// proportional to exp(-Tr H^2 / (2 v^2)): real diagonal entries N(0, v^2),
// off-diagonal entries with independent real and imaginary parts N(0, v^2/2)
// so that E|H_ij|^2 = v^2.  Hermitian by construction.
Eigen::MatrixXcd sample_gue(int n, double v, Rng& rng);

// exp(-i lambda tau H) applied through the eigendecomposition of H.
Eigen::MatrixXcd unitary_of(const Eigen::MatrixXcd& h, double angle);

// psi' = exp(-i lambda tau H_rand) psi; H_rand must act on the full state.
QuantumState kick(const QuantumState& psi, const Eigen::MatrixXcd& h_rand, double lambda,
                  double tau);

// Kick restricted to a low-energy subspace: unitary on range(basis),
// identity on its orthogonal complement.
QuantumState kick_in_subspace(const QuantumState& psi, const Eigen::MatrixXcd& basis,
                              const Eigen::MatrixXcd& h_rand, double lambda, double tau);

}  // namespace tangentlab
