// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// callers reach it only through the runtime dispatch in kernels_dispatch.cpp,
// which checks CPU support first.

#include "subspec/kernels.hpp"

#if defined(SUBSPEC_HAVE_AVX2_TU)

#include <immintrin.h>

namespace subspec::kernels {
namespace {

// two complex<double> per __m256d, interleaved [re0, im0, re1, im1]
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d bre = _mm256_movedup_pd(b);
  __m256d bim = _mm256_permute_pd(b, 0xF);
  __m256d asw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, bre, _mm256_mul_pd(asw, bim));
}

inline cd reduce_c(__m256d acc) {
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  return {buf[0] + buf[2], buf[1] + buf[3]};
}

cd zdotu_avx2(const cd* a, const cd* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc = _mm256_add_pd(acc, cmul(va, vb));
  }
  cd s = reduce_c(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cd zdotc_avx2(const cd* a, const cd* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const __m256d conj_mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_xor_pd(_mm256_loadu_pd(pa + 2 * i), conj_mask);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc = _mm256_add_pd(acc, cmul(va, vb));
  }
  cd s = reduce_c(acc);
  for (; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

cd ztripledot_avx2(const cd* a, const cd* b, const cd* c, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const double* pc = reinterpret_cast<const double*>(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    __m256d vc = _mm256_loadu_pd(pc + 2 * i);
    acc = _mm256_add_pd(acc, cmul(cmul(va, vb), vc));
  }
  cd s = reduce_c(acc);
  for (; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void zaxpy_avx2(cd alpha, const cd* x, cd* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d va = _mm256_setr_pd(alpha.real(), alpha.imag(),
                                    alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * i);
    __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul(vx, va)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double znorm2sq_avx2(const cd* a, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * i);
    acc = _mm256_fmadd_pd(va, va, acc);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double s = buf[0] + buf[1] + buf[2] + buf[3];
  for (; i < n; ++i) s += std::norm(a[i]);
  return s;
}

}  // namespace

const Ops* avx2_ops_if_supported() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma"))
    return nullptr;
  static const Ops ops{zdotu_avx2, zdotc_avx2, ztripledot_avx2,
                       zaxpy_avx2, znorm2sq_avx2, "avx2"};
  return &ops;
}

}  // namespace subspec::kernels

#endif  // SUBSPEC_HAVE_AVX2_TU
