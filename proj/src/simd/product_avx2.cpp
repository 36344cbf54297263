// AVX2 + FMA variants of the product-kernel loops, four points per register.
// Compiled with -mavx2 -mfma; only reached when the CPU reports both features.
#include <immintrin.h>

#include <cmath>

#include "latkde/errors.hpp"
#include "product_kernels.hpp"

namespace latkde::simd::avx2 {
namespace {

template <int Degree>
inline __m256d horner(const double* poly, __m256d x) {
  __m256d acc = _mm256_set1_pd(poly[Degree]);
  for (int p = Degree - 1; p >= 0; --p) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(poly[p]));
  return acc;
}

template <int Degree>
inline double horner_scalar(const double* poly, double x) {
  double acc = poly[Degree];
  for (int p = Degree - 1; p >= 0; --p) acc = std::fma(acc, x, poly[p]);
  return acc;
}

template <int Degree>
inline __m256d product4(const ProductArgs& a, std::size_t m) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d prod = one;
  const std::size_t dim = a.scales.size();
  for (std::size_t j = 0; j < dim; ++j) {
    const __m256d t =
        _mm256_sub_pd(_mm256_loadu_pd(a.points + j * a.count + m), _mm256_set1_pd(a.offset[j]));
    const __m256d frac = _mm256_sub_pd(t, _mm256_floor_pd(t));
    const __m256d b = horner<Degree>(a.poly.data(), frac);
    prod = _mm256_mul_pd(prod, _mm256_fmadd_pd(_mm256_set1_pd(a.scales[j]), b, one));
  }
  return prod;
}

template <int Degree>
inline double product1(const ProductArgs& a, std::size_t m) {
  double prod = 1.0;
  for (std::size_t j = 0; j < a.scales.size(); ++j) {
    const double t = a.points[j * a.count + m] - a.offset[j];
    const double frac = t - std::floor(t);
    prod *= std::fma(a.scales[j], horner_scalar<Degree>(a.poly.data(), frac), 1.0);
  }
  return prod;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

template <int Degree>
double shifted_sum_impl(const ProductArgs& a) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t m = 0;
  for (; m + 8 <= a.count; m += 8) {
    acc0 = _mm256_add_pd(acc0, product4<Degree>(a, m));
    acc1 = _mm256_add_pd(acc1, product4<Degree>(a, m + 4));
  }
  if (m + 4 <= a.count) {
    acc0 = _mm256_add_pd(acc0, product4<Degree>(a, m));
    m += 4;
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; m < a.count; ++m) sum += product1<Degree>(a, m);
  return sum;
}

template <int Degree>
void shifted_eval_impl(const ProductArgs& a, double* out) {
  std::size_t m = 0;
  for (; m + 4 <= a.count; m += 4) _mm256_storeu_pd(out + m, product4<Degree>(a, m));
  for (; m < a.count; ++m) out[m] = product1<Degree>(a, m);
}

}  // namespace

double shifted_sum(const ProductArgs& args) {
  switch (args.degree) {
    case 2: return shifted_sum_impl<2>(args);
    case 4: return shifted_sum_impl<4>(args);
    case 6: return shifted_sum_impl<6>(args);
    case 8: return shifted_sum_impl<8>(args);
    default: throw ConfigError("avx2::shifted_sum: unsupported degree");
  }
}

void shifted_eval(const ProductArgs& args, double* out) {
  switch (args.degree) {
    case 2: shifted_eval_impl<2>(args, out); return;
    case 4: shifted_eval_impl<4>(args, out); return;
    case 6: shifted_eval_impl<6>(args, out); return;
    case 8: shifted_eval_impl<8>(args, out); return;
    default: throw ConfigError("avx2::shifted_eval: unsupported degree");
  }
}

}  // namespace latkde::simd::avx2
