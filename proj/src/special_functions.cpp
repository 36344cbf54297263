#include "latkde/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latkde/errors.hpp"

namespace latkde {
namespace {

constexpr std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr std::array<Rational, 9> kBernoulliNumbers = {
    Rational(1),     Rational(-1, 2), Rational(1, 6), Rational(0), Rational(-1, 30),
    Rational(0),     Rational(1, 42), Rational(0),    Rational(-1, 30)};

bool supported_degree(int degree) {
  return degree == 2 || degree == 4 || degree == 6 || degree == 8;
}

}  // namespace

Rational bernoulli_number(int n) {
  if (n < 0 || n > kMaxBernoulliDegree) {
    throw ConfigError("Bernoulli number index out of range: " + std::to_string(n));
  }
  return kBernoulliNumbers[static_cast<std::size_t>(n)];
}

BernoulliPoly::BernoulliPoly(int degree) : degree_(degree) {
  if (!supported_degree(degree)) {
    throw ConfigError("unsupported Bernoulli polynomial degree " + std::to_string(degree) +
                      " (supported: 2, 4, 6, 8)");
  }
  // B_n(x) = sum_k C(n,k) B_k x^(n-k)
  for (int k = 0; k <= degree; ++k) {
    exact_[static_cast<std::size_t>(degree - k)] =
        Rational(binomial(degree, k)) * kBernoulliNumbers[static_cast<std::size_t>(k)];
  }
  for (int p = 0; p <= degree; ++p) {
    coeffs_[static_cast<std::size_t>(p)] = exact_[static_cast<std::size_t>(p)].to_double();
  }
}

double BernoulliPoly::operator()(double x) const {
  double acc = coeffs_[static_cast<std::size_t>(degree_)];
  for (int p = degree_ - 1; p >= 0; --p) acc = acc * x + coeffs_[static_cast<std::size_t>(p)];
  return acc;
}

const BernoulliPoly& bernoulli_poly(int degree) {
  static const BernoulliPoly b2(2), b4(4), b6(6), b8(8);
  switch (degree) {
    case 2: return b2;
    case 4: return b4;
    case 6: return b6;
    case 8: return b8;
    default:
      throw ConfigError("unsupported Bernoulli polynomial degree " + std::to_string(degree) +
                        " (supported: 2, 4, 6, 8)");
  }
}

double bernoulli_eval(int degree, double x) {
  const BernoulliPoly& b = bernoulli_poly(degree);
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("bernoulli_eval: x must lie in [0,1], reduce to the fractional part first");
  }
  // B_n(1) = B_n(0) for n >= 2; evaluating at 0 makes the endpoint identity exact.
  return b(x == 1.0 ? 0.0 : x);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double zeta_value(double s) {
  if (!(s > 1.0)) throw DomainError("zeta_value: s must exceed 1");
  constexpr double pi = std::numbers::pi;
  if (s == 2.0) return pi * pi / 6.0;
  if (s == 4.0) return std::pow(pi, 4) / 90.0;
  if (s == 6.0) return std::pow(pi, 6) / 945.0;
  if (s == 8.0) return std::pow(pi, 8) / 9450.0;

  // Direct sum to K-1, Euler-Maclaurin tail from K.
  constexpr int K = 64;
  double head = 0.0;
  for (int k = K - 1; k >= 1; --k) head += std::pow(static_cast<double>(k), -s);
  const double kk = K;
  double tail = std::pow(kk, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(kk, -s);
  // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) K^{-s-2j+1}
  double rising = s;
  for (int j = 1; j <= 4; ++j) {
    const double b2j = bernoulli_number(2 * j).to_double();
    tail += b2j / factorial(2 * j) * rising * std::pow(kk, -s - 2.0 * j + 1.0);
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
  }
  return head + tail;
}

}  // namespace latkde
