#pragma once

#include "latkde/simd.hpp"

namespace latkde::simd {

namespace scalar {
double shifted_sum(const ProductArgs& args);
void shifted_eval(const ProductArgs& args, double* out);
}  // namespace scalar

#if defined(LATKDE_HAVE_AVX2)
namespace avx2 {
double shifted_sum(const ProductArgs& args);
void shifted_eval(const ProductArgs& args, double* out);
}  // namespace avx2
#endif

}  // namespace latkde::simd
