#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

namespace tangentlab {

// Real polynomial in one variable, coefficient c[k] multiplying x^k.
// Used for external potentials; closed under differentiation and under
// Gaussian smearing, which is what the classical oracles need.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> c) : coeffs_(c) {}
  explicit Polynomial(std::vector<double> c) : coeffs_(std::move(c)) {}

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
      d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  // E[P(a + u)] as a polynomial in a, for u ~ N(0, sigma^2); uses the
  // central moments E[u^k] = sigma^k (k-1)!! for even k.
  Polynomial gaussian_smeared(double sigma) const;

  const std::vector<double>& coefficients() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  // Degree <= 2, i.e. the force it induces is linear (harmonic or free).
  bool quadratic_or_lower() const { return coeffs_.size() <= 3; }

 private:
  std::vector<double> coeffs_;
};

}  // namespace tangentlab
