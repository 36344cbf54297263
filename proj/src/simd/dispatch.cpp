#include <atomic>
#include <cstdlib>
#include <string>

#include "latkde/errors.hpp"
#include "product_kernels.hpp"

namespace latkde::simd {
namespace {

constexpr ProductOps kScalarOps{&scalar::shifted_sum, &scalar::shifted_eval};
#if defined(LATKDE_HAVE_AVX2)
constexpr ProductOps kAvx2Ops{&avx2::shifted_sum, &avx2::shifted_eval};
#endif

bool cpu_has_avx2() {
#if defined(LATKDE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("LATKDE_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw ConfigError("SIMD variant not available: " + std::string(isa_name(isa)));
  }
  active().store(isa, std::memory_order_relaxed);
}

const ProductOps& ops(Isa isa) {
  switch (isa) {
    case Isa::scalar: return kScalarOps;
    case Isa::avx2:
#if defined(LATKDE_HAVE_AVX2)
      if (cpu_has_avx2()) return kAvx2Ops;
#endif
      break;
  }
  throw ConfigError("SIMD variant not available: " + std::string(isa_name(isa)));
}

}  // namespace latkde::simd
