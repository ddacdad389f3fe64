#pragma once

#include <cstddef>
#include <string>

#include "subspec/common.hpp"

// Hot inner loops of the grid operators (twisted convolutions, basis
// contractions, norms). A scalar reference implementation always exists;
// an AVX2 (x86) or NEON (aarch64) variant is selected at runtime when the
// CPU supports it. The variants are equivalence-tested against the scalar
// reference in tests/test_kernels.cpp.

namespace subspec::kernels {

struct Ops {
  // sum a[i]*b[i] (no conjugation)
  cd (*zdotu)(const cd* a, const cd* b, std::size_t n);
  // sum conj(a[i])*b[i]
  cd (*zdotc)(const cd* a, const cd* b, std::size_t n);
  // sum a[i]*b[i]*c[i]
  cd (*ztripledot)(const cd* a, const cd* b, const cd* c, std::size_t n);
  // y[i] += alpha*x[i]
  void (*zaxpy)(cd alpha, const cd* x, cd* y, std::size_t n);
  // sum |a[i]|^2
  double (*znorm2sq)(const cd* a, std::size_t n);
  const char* name;
};

// Active backend (env SUBSPEC_FORCE_SCALAR=1 pins the scalar reference).
const Ops& ops();

// Scalar reference, always available.
const Ops& scalar_ops();

// SIMD backend compiled into this build, or nullptr if the CPU lacks it.
const Ops* simd_ops();

}  // namespace subspec::kernels
