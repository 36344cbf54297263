#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latkde/bernoulli_product.hpp"
#include "latkde/kernels.hpp"
#include "latkde/point_set.hpp"
#include "latkde/rng.hpp"

namespace latkde {

/// Benchmark density on [0,1]^d,  f(y) = prod_j (1 + a_j B_4(y_j)),  a_j = j^-4 by default.
///
/// Each factor integrates to 1 and stays positive while -240/7 < a_j < 30.
class TestDensity {
 public:
  explicit TestDensity(std::size_t dim);
  explicit TestDensity(std::vector<double> amplitudes);

  std::size_t dim() const noexcept { return a_.size(); }
  std::span<const double> amplitudes() const noexcept { return a_; }

  /// y outside [0,1]^d -> DomainError.
  double operator()(std::span<const double> y) const;

  /// f as a BernoulliProduct (degree 4, scales a_j), for batched evaluation.
  const BernoulliProduct& as_product() const noexcept { return product_; }

  /// Envelope of the joint sampler, C = prod_j max_y (1 + a_j B_4(y)).
  double envelope() const;
  /// max_y (1 + a_j B_4(y)) for one coordinate.
  double factor_envelope(std::size_t j) const;

  /// Marginal CDF of coordinate j: y + a_j (y^5/5 - y^4/2 + y^3/3 - y/30).
  double marginal_cdf(std::size_t j, double y) const;

  /// f^(h) for all h with |h|_inf <= h_max (real; f^(-h) = f^(h)).
  FourierCoefficients fourier_coefficients(int h_max) const;

  /// int K(x, y) f(y) dy in closed form (product of 1 + c_j B_{alpha+4}({x_j}) factors).
  /// Needs alpha in {2, 4}; the kernel dimension must match.
  BernoulliProduct mean_embedding(const KorobovKernel& kernel) const;

  /// ||f||_{L2}^2 = prod_j (1 + a_j^2 / 2100).
  double l2_norm_squared() const;

 private:
  std::vector<double> a_;
  BernoulliProduct product_;
};

/// Fourier coefficient of one factor 1 + a B_4(y) at frequency h != 0: -24 a / (2 pi h)^4.
double test_density_factor_coefficient(double amplitude, int h);

enum class SamplerMode {
  factorized,  // each coordinate drawn by its own 1-d rejection sampler
  joint,       // one uniform proposal in [0,1]^d, envelope C
};

struct SamplerStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Fills every point of `out` with independent draws from f by acceptance-rejection with
/// uniform proposals. Statistics are accumulated into `stats` when given.
void sample_into(const TestDensity& f, RandomStream& rng, PointSet& out,
                 SamplerMode mode = SamplerMode::factorized, SamplerStats* stats = nullptr);

/// M draws with stream (seed, stream).
PointSet sample(const TestDensity& f, std::size_t count, std::uint64_t seed,
                std::uint64_t stream = 0, SamplerMode mode = SamplerMode::factorized);

}  // namespace latkde
