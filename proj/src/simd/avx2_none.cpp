#include "brepforge/simd/kernels.hpp"

namespace brepforge::simd {

const Kernels* avx2_kernels() { return nullptr; }

}  // namespace brepforge::simd
