#include <cstdlib>
#include <cstring>

#include "brepforge/simd/kernels.hpp"

namespace brepforge::simd {

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("BREPFORGE_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return avx2_kernels() != nullptr && cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

const Kernels& kernels(Isa isa) {
  if (isa == Isa::Avx2 && avx2_kernels() != nullptr) return *avx2_kernels();
  return scalar_kernels();
}

const Kernels& kernels() { return kernels(active_isa()); }

}  // namespace brepforge::simd
