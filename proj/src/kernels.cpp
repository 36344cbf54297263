#include "latkde/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latkde/errors.hpp"
#include "latkde/special_functions.hpp"

namespace latkde {

ProductWeights::ProductWeights(std::vector<double> gamma) : gamma_(std::move(gamma)) {
  if (gamma_.empty()) throw ConfigError("ProductWeights: dimension must be at least 1");
  for (double g : gamma_) {
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("ProductWeights: weights must be positive");
  }
}

ProductWeights ProductWeights::power_law(std::size_t dim, double exponent) {
  std::vector<double> g(dim);
  for (std::size_t j = 0; j < dim; ++j) g[j] = std::pow(static_cast<double>(j + 1), -exponent);
  return ProductWeights(std::move(g));
}

ProductWeights ProductWeights::constant(std::size_t dim, double gamma) {
  return ProductWeights(std::vector<double>(dim, gamma));
}

ProductWeights ProductWeights::squared() const {
  std::vector<double> g(gamma_);
  for (double& v : g) v *= v;
  return ProductWeights(std::move(g));
}

double bernoulli_series_scale(int n, double gamma) {
  const double sign = ((n / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
  return gamma * sign * std::pow(2.0 * std::numbers::pi, n) / factorial(n);
}

int KorobovKernel::even_degree_(double a) noexcept {
  for (int n : {2, 4, 6, 8}) {
    if (a == static_cast<double>(n)) return n;
  }
  return 0;
}

KorobovKernel::KorobovKernel(double alpha, ProductWeights weights, int series_truncation)
    : alpha_(alpha), weights_(std::move(weights)), truncation_(series_truncation) {
  if (!(alpha_ > 1.0) || !std::isfinite(alpha_)) throw ConfigError("KorobovKernel: alpha must exceed 1");
  if (truncation_ < 1) throw ConfigError("KorobovKernel: series truncation must be positive");
  const auto build = [&](int n, const ProductWeights& w) {
    std::vector<double> scales(w.dim());
    for (std::size_t j = 0; j < w.dim(); ++j) scales[j] = bernoulli_series_scale(n, w[j]);
    return BernoulliProduct(n, std::move(scales));
  };
  if (int n = even_degree_(alpha_)) lag_.emplace(build(n, weights_));
  if (int n = even_degree_(2.0 * alpha_)) l2_lag_.emplace(build(n, weights_.squared()));
}

const BernoulliProduct& KorobovKernel::lag_kernel() const {
  if (!lag_) throw ConfigError("KorobovKernel: no closed form for alpha = " + std::to_string(alpha_));
  return *lag_;
}

const BernoulliProduct& KorobovKernel::l2_lag_kernel() const {
  if (!l2_lag_) {
    throw ConfigError("KorobovKernel: no closed L2 form for alpha = " + std::to_string(alpha_));
  }
  return *l2_lag_;
}

double KorobovKernel::series_factor(double gamma, double exponent, double t) const {
  const double frac = fractional_part(t);
  double sum = 0.0;
  for (int h = truncation_; h >= 1; --h) {
    sum += std::cos(2.0 * std::numbers::pi * h * frac) / std::pow(static_cast<double>(h), exponent);
  }
  return 1.0 + 2.0 * gamma * sum;
}

double KorobovKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dim() || y.size() != dim()) throw DomainError("KorobovKernel: dimension mismatch");
  // |x - y| keeps K(x, y) == K(y, x) bit for bit; every factor is even in the lag.
  double prod = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    const double t = std::abs(x[j] - y[j]);
    prod *= lag_ ? lag_->factor(j, t) : series_factor(weights_[j], alpha_, t);
  }
  return prod;
}

double KorobovKernel::l2(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dim() || y.size() != dim()) throw DomainError("KorobovKernel: dimension mismatch");
  double prod = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    const double t = std::abs(x[j] - y[j]);
    const double g = weights_[j];
    prod *= l2_lag_ ? l2_lag_->factor(j, t) : series_factor(g * g, 2.0 * alpha_, t);
  }
  return prod;
}

double KorobovKernel::fourier_weight(std::span<const int> h) const {
  if (h.size() != dim()) throw DomainError("fourier_weight: multi-index length mismatch");
  double w = 1.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] != 0) w *= weights_[j] / std::pow(std::abs(static_cast<double>(h[j])), alpha_);
  }
  return w;
}

MeanEmbedding::MeanEmbedding(const KorobovKernel& kernel, const FourierCoefficients& coeffs)
    : dim_(kernel.dim()) {
  if (coeffs.empty()) throw DomainError("kernel mean embedding: empty coefficient map");
  const MultiIndex zero(dim_, 0);
  const auto it = coeffs.find(zero);
  if (it == coeffs.end() || std::abs(it->second - std::complex<double>(1.0, 0.0)) > 1e-12) {
    throw DomainError("kernel mean embedding: coefficient at h = 0 must equal 1");
  }
  freqs_.reserve(coeffs.size());
  weights_.reserve(coeffs.size());
  for (const auto& [h, c] : coeffs) {
    if (h.size() != dim_) throw DomainError("kernel mean embedding: multi-index length mismatch");
    freqs_.push_back(h);
    weights_.push_back(kernel.fourier_weight(h) * c);
  }
}

std::complex<double> MeanEmbedding::evaluate_complex(std::span<const double> x) const {
  if (x.size() != dim_) throw DomainError("kernel mean embedding: dimension mismatch");
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    double phase = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) phase += freqs_[i][j] * x[j];
    phase -= std::floor(phase);
    sum += weights_[i] * std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return sum;
}

}  // namespace latkde
