#include <doctest.h>

#include <random>

#include "subspec/kernels.hpp"

using namespace subspec;

namespace {

std::vector<cd> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cd> v(n);
  for (cd& x : v) x = cd(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("scalar kernels against naive loops") {
  auto a = random_vec(37, 1), b = random_vec(37, 2), c = random_vec(37, 3);
  const auto& ops = kernels::scalar_ops();

  cd dotu = 0.0, dotc = 0.0, triple = 0.0;
  double n2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dotu += a[i] * b[i];
    dotc += std::conj(a[i]) * b[i];
    triple += a[i] * b[i] * c[i];
    n2 += std::norm(a[i]);
  }
  CHECK(std::abs(ops.zdotu(a.data(), b.data(), a.size()) - dotu) < 1e-12);
  CHECK(std::abs(ops.zdotc(a.data(), b.data(), a.size()) - dotc) < 1e-12);
  CHECK(std::abs(ops.ztripledot(a.data(), b.data(), c.data(), a.size()) -
                 triple) < 1e-12);
  CHECK(ops.znorm2sq(a.data(), a.size()) == doctest::Approx(n2));

  auto y = c;
  ops.zaxpy(cd(0.5, -2.0), a.data(), y.data(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(y[i] - (c[i] + cd(0.5, -2.0) * a[i])) < 1e-14);
}

TEST_CASE("simd backend matches scalar reference") {
  const kernels::Ops* simd = kernels::simd_ops();
  if (!simd) {
    MESSAGE("no SIMD backend on this CPU; skipping equivalence checks");
    return;
  }
  const auto& ref = kernels::scalar_ops();
  for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(2),
                        std::size_t(7), std::size_t(64), std::size_t(1001)}) {
    auto a = random_vec(n, 10 + n), b = random_vec(n, 20 + n),
         c = random_vec(n, 30 + n);
    double scale = std::max(1.0, std::abs(ref.zdotu(a.data(), b.data(), n)));
    CHECK(std::abs(simd->zdotu(a.data(), b.data(), n) -
                   ref.zdotu(a.data(), b.data(), n)) < 1e-12 * scale);
    CHECK(std::abs(simd->zdotc(a.data(), b.data(), n) -
                   ref.zdotc(a.data(), b.data(), n)) < 1e-12 * scale);
    CHECK(std::abs(simd->ztripledot(a.data(), b.data(), c.data(), n) -
                   ref.ztripledot(a.data(), b.data(), c.data(), n)) <
          1e-11 * std::max(1.0, scale));
    CHECK(simd->znorm2sq(a.data(), n) ==
          doctest::Approx(ref.znorm2sq(a.data(), n)));
    auto y1 = c, y2 = c;
    simd->zaxpy(cd(1.25, -0.5), a.data(), y1.data(), n);
    ref.zaxpy(cd(1.25, -0.5), a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
  }
}

TEST_CASE("dispatch honors SUBSPEC_FORCE_SCALAR") {
  // ops() was initialized at first use; just confirm it names a backend
  CHECK((std::string(kernels::ops().name) == "scalar" ||
         std::string(kernels::ops().name) == "avx2" ||
         std::string(kernels::ops().name) == "neon"));
}
