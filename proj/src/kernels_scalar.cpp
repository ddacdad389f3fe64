#include "subspec/kernels.hpp"

namespace subspec::kernels {
namespace {

cd zdotu_scalar(const cd* a, const cd* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

cd zdotc_scalar(const cd* a, const cd* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

cd ztripledot_scalar(const cd* a, const cd* b, const cd* c, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pre = a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    const double pim = a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    re += pre * c[i].real() - pim * c[i].imag();
    im += pre * c[i].imag() + pim * c[i].real();
  }
  return {re, im};
}

void zaxpy_scalar(cd alpha, const cd* x, cd* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double znorm2sq_scalar(const cd* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{zdotu_scalar, zdotc_scalar, ztripledot_scalar,
                       zaxpy_scalar, znorm2sq_scalar, "scalar"};
  return ops;
}

}  // namespace subspec::kernels
