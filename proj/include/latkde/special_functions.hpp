#pragma once

#include <array>
#include <span>

#include "latkde/rational.hpp"

namespace latkde {

inline constexpr int kMaxBernoulliDegree = 8;

/// Even-degree Bernoulli polynomial B_n(x) = sum_k C(n,k) B_k x^(n-k), n in {2,4,6,8},
/// stored with exact rational monomial coefficients (index = power of x).
class BernoulliPoly {
 public:
  /// Throws ConfigError for degrees other than 2, 4, 6, 8.
  explicit BernoulliPoly(int degree);

  int degree() const noexcept { return degree_; }
  std::span<const Rational> exact_coefficients() const noexcept {
    return {exact_.data(), static_cast<std::size_t>(degree_) + 1};
  }
  std::span<const double> coefficients() const noexcept {
    return {coeffs_.data(), static_cast<std::size_t>(degree_) + 1};
  }

  /// Horner evaluation; x must already be reduced to [0,1].
  double operator()(double x) const;

 private:
  int degree_;
  std::array<Rational, kMaxBernoulliDegree + 1> exact_{};
  std::array<double, kMaxBernoulliDegree + 1> coeffs_{};
};

/// Shared immutable instance for a supported degree.
const BernoulliPoly& bernoulli_poly(int degree);

/// B_degree(x) for x in [0,1]. Unsupported degree -> ConfigError, x outside [0,1] -> DomainError.
double bernoulli_eval(int degree, double x);

/// Bernoulli number B_n for 0 <= n <= 8, exact.
Rational bernoulli_number(int n);

/// Riemann zeta for s > 1, absolute error below 1e-12.
double zeta_value(double s);

/// n! as a double, exact for the small n used here.
double factorial(int n);

}  // namespace latkde
