#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "latkde/bernoulli_product.hpp"

namespace latkde::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the CPU (and the build) provide the given variant.
bool isa_available(Isa isa);

/// Variant used by BernoulliProduct. Chosen once at first use: the best available ISA unless
/// the environment variable LATKDE_SIMD=scalar forces the reference path.
Isa active_isa();

/// Overrides the active variant (tests, benchmarks). Throws ConfigError if unavailable.
void set_active_isa(Isa isa);

/// Raw kernel arguments, coordinate-major points.
struct ProductArgs {
  int degree;
  std::span<const double> poly;    // degree + 1 ascending coefficients
  std::span<const double> scales;  // one per coordinate
  const double* points;            // dim * count, coordinate-major
  std::size_t count;
  std::span<const double> offset;  // one per coordinate
};

using ShiftedSumFn = double (*)(const ProductArgs&);
using ShiftedEvalFn = void (*)(const ProductArgs&, double* out);

struct ProductOps {
  ShiftedSumFn shifted_sum;
  ShiftedEvalFn shifted_eval;
};

/// Kernel table for one variant. Throws ConfigError if unavailable.
const ProductOps& ops(Isa isa);

}  // namespace latkde::simd
