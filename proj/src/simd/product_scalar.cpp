// Reference implementation of the product-kernel loops. Every vectorized variant is tested
// against these.
#include <cmath>

#include "product_kernels.hpp"

namespace latkde::simd::scalar {
namespace {

inline double horner(std::span<const double> poly, double x) {
  double acc = poly.back();
  for (std::size_t p = poly.size() - 1; p-- > 0;) acc = acc * x + poly[p];
  return acc;
}

inline double product_at(const ProductArgs& a, std::size_t m) {
  double prod = 1.0;
  for (std::size_t j = 0; j < a.scales.size(); ++j) {
    const double t = a.points[j * a.count + m] - a.offset[j];
    const double frac = t - std::floor(t);
    prod *= 1.0 + a.scales[j] * horner(a.poly, frac);
  }
  return prod;
}

}  // namespace

double shifted_sum(const ProductArgs& args) {
  double sum = 0.0;
  for (std::size_t m = 0; m < args.count; ++m) sum += product_at(args, m);
  return sum;
}

void shifted_eval(const ProductArgs& args, double* out) {
  for (std::size_t m = 0; m < args.count; ++m) out[m] = product_at(args, m);
}

}  // namespace latkde::simd::scalar
