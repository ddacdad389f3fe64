#include "subspec/kernels.hpp"

#include <cstdlib>

namespace subspec::kernels {

#if defined(SUBSPEC_HAVE_AVX2_TU)
const Ops* avx2_ops_if_supported();
#endif
#if defined(SUBSPEC_HAVE_NEON_TU)
const Ops* neon_ops_if_supported();
#endif

const Ops* simd_ops() {
#if defined(SUBSPEC_HAVE_AVX2_TU)
  return avx2_ops_if_supported();
#elif defined(SUBSPEC_HAVE_NEON_TU)
  return neon_ops_if_supported();
#else
  return nullptr;
#endif
}

const Ops& ops() {
  static const Ops* active = [] {
    const char* force = std::getenv("SUBSPEC_FORCE_SCALAR");
    if (force && force[0] == '1') return &scalar_ops();
    if (const Ops* simd = simd_ops()) return simd;
    return &scalar_ops();
  }();
  return *active;
}

}  // namespace subspec::kernels
