#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "latkde/point_set.hpp"

namespace latkde {

/// A 1-periodic product function
///
///     g(t) = prod_j (1 + s_j * B_n({t_j}))
///
/// with a single even Bernoulli degree n and per-coordinate scales s_j. The Korobov kernel,
/// its L2-product kernel, the kernel mean embedding of the benchmark density, the benchmark
/// density itself and the lattice CBC criterion are all of this form, so the data-parallel
/// loops of the library are written once against it (see simd.hpp).
class BernoulliProduct {
 public:
  BernoulliProduct(int degree, std::vector<double> scales);

  int degree() const noexcept { return degree_; }
  std::size_t dim() const noexcept { return scales_.size(); }
  std::span<const double> scales() const noexcept { return scales_; }
  /// Monomial coefficients of B_n in double, ascending powers.
  std::span<const double> poly() const noexcept { return poly_; }

  /// g(t) for an arbitrary real vector t; reduces each coordinate with {t} = t - floor(t).
  double operator()(std::span<const double> t) const;

  /// One factor 1 + s_j B_n({t}).
  double factor(std::size_t j, double t) const;

  /// sum_m g(points[m] - offset)
  double shifted_sum(const PointSet& points, std::span<const double> offset) const;

  /// out[m] = g(points[m] - offset)
  void shifted_eval(const PointSet& points, std::span<const double> offset,
                    std::span<double> out) const;

 private:
  int degree_;
  std::vector<double> scales_;
  std::vector<double> poly_;
};

/// {t} = t - floor(t); exact integers map to 0. Tiny negative t may round up to 1.0, which is
/// harmless for the even-degree (periodic) Bernoulli polynomials used here.
inline double fractional_part(double t) noexcept { return t - std::floor(t); }

}  // namespace latkde
