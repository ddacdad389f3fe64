// NEON variants for aarch64 builds (one complex<double> per 128-bit register).

#include "subspec/kernels.hpp"

#if defined(SUBSPEC_HAVE_NEON_TU)

#include <arm_neon.h>

namespace subspec::kernels {
namespace {

// lane layout [re, im]
inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
  // [a.re*b.re, a.re*b.im]
  float64x2_t t = vmulq_f64(vdupq_laneq_f64(a, 0), b);
  // [a.im*b.im, a.im*b.re]
  float64x2_t u = vmulq_f64(vdupq_laneq_f64(a, 1), vextq_f64(b, b, 1));
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(t, u, sign);
}

cd zdotu_neon(const cd* a, const cd* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i)
    acc = vaddq_f64(acc, cmul(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i)));
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

cd zdotc_neon(const cd* a, const cd* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const float64x2_t conj_sign = {1.0, -1.0};
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t va = vmulq_f64(vld1q_f64(pa + 2 * i), conj_sign);
    acc = vaddq_f64(acc, cmul(va, vld1q_f64(pb + 2 * i)));
  }
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

cd ztripledot_neon(const cd* a, const cd* b, const cd* c, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const double* pc = reinterpret_cast<const double*>(c);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t p = cmul(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i));
    acc = vaddq_f64(acc, cmul(p, vld1q_f64(pc + 2 * i)));
  }
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

void zaxpy_neon(cd alpha, const cd* x, cd* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const float64x2_t va = {alpha.real(), alpha.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t vy = vld1q_f64(py + 2 * i);
    vst1q_f64(py + 2 * i, vaddq_f64(vy, cmul(vld1q_f64(px + 2 * i), va)));
  }
}

double znorm2sq_neon(const cd* a, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t va = vld1q_f64(pa + 2 * i);
    acc = vfmaq_f64(acc, va, va);
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

}  // namespace

const Ops* neon_ops_if_supported() {
  static const Ops ops{zdotu_neon, zdotc_neon, ztripledot_neon,
                       zaxpy_neon, znorm2sq_neon, "neon"};
  return &ops;
}

}  // namespace subspec::kernels

#endif  // SUBSPEC_HAVE_NEON_TU
