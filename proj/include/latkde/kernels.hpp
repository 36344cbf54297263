#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "latkde/bernoulli_product.hpp"

namespace latkde {

/// Product weights gamma_1..gamma_d; gamma of the empty set is implicitly 1.
class ProductWeights {
 public:
  explicit ProductWeights(std::vector<double> gamma);

  /// gamma_j = j^(-exponent), j = 1..d. The benchmark setting uses exponent = alpha.
  static ProductWeights power_law(std::size_t dim, double exponent);
  static ProductWeights constant(std::size_t dim, double gamma);

  std::size_t dim() const noexcept { return gamma_.size(); }
  std::span<const double> gamma() const noexcept { return gamma_; }
  double operator[](std::size_t j) const noexcept { return gamma_[j]; }

  /// gamma_j^2 for every j.
  ProductWeights squared() const;

 private:
  std::vector<double> gamma_;
};

inline constexpr int kDefaultSeriesTruncation = 10000;

/// Weighted Korobov kernel with product weights,
///
///     K(x, y) = prod_j (1 + gamma_j * sum_{h != 0} e^{2 pi i h (x_j - y_j)} / |h|^alpha),
///
/// evaluated through B_alpha when alpha is an even integer <= 8 and through a truncated cosine
/// series of H terms otherwise. The same object evaluates the L2-product kernel
/// K~(x, y) = <K(x,.), K(y,.)>_{L2}, whose Fourier weights are the squares of those of K.
class KorobovKernel {
 public:
  KorobovKernel(double alpha, ProductWeights weights,
                int series_truncation = kDefaultSeriesTruncation);

  double alpha() const noexcept { return alpha_; }
  const ProductWeights& weights() const noexcept { return weights_; }
  std::size_t dim() const noexcept { return weights_.dim(); }
  int series_truncation() const noexcept { return truncation_; }

  /// alpha is one of 2, 4, 6, 8, so K has a Bernoulli closed form.
  bool has_closed_form() const noexcept { return even_degree_(alpha_) != 0; }
  /// 2 alpha is one of 4, 8, so K~ has a Bernoulli closed form.
  bool has_l2_closed_form() const noexcept { return even_degree_(2.0 * alpha_) != 0; }

  double operator()(std::span<const double> x, std::span<const double> y) const;
  double l2(std::span<const double> x, std::span<const double> y) const;

  /// K and K~ as functions of the lag t = x - y. Throw ConfigError without a closed form.
  const BernoulliProduct& lag_kernel() const;
  const BernoulliProduct& l2_lag_kernel() const;

  /// r(h, gamma)^{-1} for a frequency multi-index of length d.
  double fourier_weight(std::span<const int> h) const;

 private:
  static int even_degree_(double a) noexcept;
  double series_factor(double gamma, double exponent, double t) const;

  double alpha_;
  ProductWeights weights_;
  int truncation_;
  std::optional<BernoulliProduct> lag_;
  std::optional<BernoulliProduct> l2_lag_;
};

/// Scale s such that 1 + gamma * sum_{h != 0} e^{2 pi i h t} / |h|^n = 1 + s * B_n({t}) for even
/// n: s = gamma * (-1)^(n/2 + 1) (2 pi)^n / n!.
double bernoulli_series_scale(int n, double gamma);

using MultiIndex = std::vector<int>;
using FourierCoefficients = std::map<MultiIndex, std::complex<double>>;

/// x -> int K(x, y) f(y) dy for a density given by finitely many Fourier coefficients
/// f^(h) = int f(y) e^{-2 pi i h.y} dy:  sum_h r(h)^{-1} f^(h) e^{2 pi i h.x}.
class MeanEmbedding {
 public:
  /// Empty map, wrong multi-index length or f^(0) != 1 -> DomainError.
  MeanEmbedding(const KorobovKernel& kernel, const FourierCoefficients& coeffs);

  double operator()(std::span<const double> x) const { return evaluate_complex(x).real(); }
  std::complex<double> evaluate_complex(std::span<const double> x) const;

  std::size_t terms() const noexcept { return weights_.size(); }

 private:
  std::size_t dim_;
  std::vector<MultiIndex> freqs_;
  std::vector<std::complex<double>> weights_;
};

inline MeanEmbedding kernel_mean_embedding_fourier(const KorobovKernel& kernel,
                                                   const FourierCoefficients& coeffs) {
  return MeanEmbedding(kernel, coeffs);
}

}  // namespace latkde
