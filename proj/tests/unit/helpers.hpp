#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "latkde/point_set.hpp"
#include "latkde/rng.hpp"

namespace testing {

inline latkde::PointSet random_points(std::size_t d, std::size_t n, std::uint64_t seed) {
  latkde::RandomStream rng(seed, 99);
  latkde::PointSet p(d, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) p.at(i, j) = rng.uniform();
  return p;
}

/// 1 + 2 gamma sum_{h=1}^{H} cos(2 pi h t) / h^s, summed from the small end up.
inline double series_factor(double gamma, double s, double t, int terms) {
  double acc = 0.0;
  for (int h = terms; h >= 1; --h) acc += std::cos(2.0 * std::numbers::pi * h * t) / std::pow(h, s);
  return 1.0 + 2.0 * gamma * acc;
}

inline double series_kernel(std::span<const double> gamma, double s, std::span<const double> x,
                            std::span<const double> y, int terms) {
  double p = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) p *= series_factor(gamma[j], s, x[j] - y[j], terms);
  return p;
}

inline double relative_error(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace testing
