#include "tangentlab/polynomial.hpp"

namespace tangentlab {

Polynomial Polynomial::gaussian_smeared(double sigma) const {
  if (coeffs_.empty()) return {};
  const std::size_t deg = coeffs_.size() - 1;

  // Central moments mu[k] = E[u^k] for u ~ N(0, sigma^2).
  std::vector<double> mu(deg + 1, 0.0);
  mu[0] = 1.0;
  for (std::size_t k = 2; k <= deg; k += 2) mu[k] = mu[k - 2] * sigma * sigma * static_cast<double>(k - 1);

  // Binomial expansion of E[(a+u)^n] collected by powers of a.
  std::vector<double> out(coeffs_.size(), 0.0);
  std::vector<std::vector<double>> binom(deg + 1, std::vector<double>(deg + 1, 0.0));
  for (std::size_t n = 0; n <= deg; ++n) {
    binom[n][0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k)
      binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0.0);
  }
  for (std::size_t n = 0; n < coeffs_.size(); ++n)
    for (std::size_t k = 0; k <= n; ++k)
      out[n - k] += coeffs_[n] * binom[n][k] * mu[k];

  return Polynomial(std::move(out));
}

}  // namespace tangentlab
