#include <doctest.h>

#include <cmath>
#include <random>

#include "subspec/laguerre.hpp"

using namespace subspec;

namespace {

// explicit series L_k^a(x) = sum_j (-1)^j binom(k+a, k-j) x^j / j!
double laguerre_series(int k, int a, double x) {
  double s = 0.0, xj = 1.0, fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      xj *= -x;
      fact *= j;
    }
    s += binomial(k + a, k - j) * xj / fact;
  }
  return s;
}

}  // namespace

TEST_CASE("laguerre recurrence") {
  CHECK(laguerre_poly(0, 0, 3.7) == 1.0);
  CHECK(laguerre_poly(0, 5, -1.0) == 1.0);
  CHECK(laguerre_poly(1, 0, 2.0) == doctest::Approx(-1.0));
  CHECK(laguerre_poly(3, 1, 0.0) == doctest::Approx(4.0));  // binom(4,3)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int t = 0; t < 40; ++t) {
    int k = t % 9, a = t % 4;
    double x = u(rng);
    CHECK(laguerre_poly(k, a, x) ==
          doctest::Approx(laguerre_series(k, a, x)).epsilon(1e-10));
    CHECK(laguerre_scaled(k, a, x) ==
          doctest::Approx(laguerre_series(k, a, x) * std::exp(-0.5 * x))
              .epsilon(1e-10));
  }
  // stays finite at large index
  CHECK(std::isfinite(laguerre_scaled(10000, 0, 123.4)));
}

TEST_CASE("rescaled laguerre function phi") {
  CHECK(phi_radial(0, 1.0, 1, 0.0) == doctest::Approx(1.0));
  for (int k = 0; k < 6; ++k)
    CHECK(phi_radial(k, 2.0, 2, 0.0) == doctest::Approx(4.0 * (k + 1)));
  CHECK(phi_radial(0, 1.0, 1, 4.0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(phi_radial(0, 0.0, 1, 1.0), config_error);
  CHECK_THROWS_AS(phi_radial(0, -1.0, 1, 1.0), config_error);
}

TEST_CASE("phi scaling law: phi(k, s lambda, m, z/sqrt(s)) = s^m phi(k, lambda, m, z)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int t = 0; t < 30; ++t) {
    int k = t % 7;
    int m = 1 + t % 3;
    double lam = u(rng), s = u(rng), z2 = u(rng);
    double lhs = phi_radial(k, s * lam, m, z2 / s);
    double rhs = std::pow(s, m) * phi_radial(k, lam, m, z2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalue lattice") {
  BlockParams p12{{1.0, 2.0}, {1, 1}, 0};
  CHECK(eigenvalue({{0, 0}}, p12) == doctest::Approx(3.0));
  CHECK(eigenvalue({{2, 1}}, p12) == doctest::Approx(11.0));
  BlockParams p1{{1.0}, {1}, 0};
  for (int k = 0; k < 5; ++k)
    CHECK(eigenvalue({{k}}, p1) == doctest::Approx(2.0 * k + 1.0));
  CHECK_THROWS_AS(eigenvalue({{0}}, p12), config_error);
}

TEST_CASE("enumerate_lattice examples and brute-force property") {
  BlockParams p1{{1.0}, {1}, 0};
  auto pts = enumerate_lattice(p1, 0.0, 4.0);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].k == std::vector<int>{0});
  CHECK(pts[1].k == std::vector<int>{1});
  CHECK(enumerate_lattice(p1, 0.0, 1.0).empty());

  const double sq2 = std::sqrt(2.0);
  BlockParams p2{{1.0, sq2}, {1, 1}, 0};
  auto window = enumerate_lattice(p2, 5.0, 6.0);
  // brute force over the box k <= 10
  std::vector<LatticePoint> brute;
  for (int k1 = 0; k1 <= 10; ++k1)
    for (int k2 = 0; k2 <= 10; ++k2) {
      double lam = (2.0 * k1 + 1.0) + (2.0 * k2 + 1.0) * sq2;
      if (lam >= 5.0 && lam < 6.0) brute.push_back({{k1, k2}});
    }
  CHECK(window.size() == brute.size());
  for (std::size_t i = 0; i < window.size(); ++i)
    CHECK(window[i].k == brute[i].k);

  // property: agree with box scan on all windows inside [0, 40]
  for (double lo = 0.0; lo < 40.0; lo += 3.7) {
    double hi = lo + 2.3;
    auto fast = enumerate_lattice(p2, lo, hi);
    std::size_t count = 0;
    for (int k1 = 0; k1 <= 50; ++k1)
      for (int k2 = 0; k2 <= 50; ++k2) {
        double lam = (2.0 * k1 + 1.0) + (2.0 * k2 + 1.0) * sq2;
        if (lam >= lo && lam < hi) ++count;
      }
    CHECK(fast.size() == count);
  }

  CHECK_THROWS_AS(enumerate_lattice(p1, -1.0, 2.0), config_error);
  CHECK_THROWS_AS(enumerate_lattice(p1, 3.0, 2.0), config_error);
}

TEST_CASE("projection kernel closed forms") {
  BlockParams p{{1.0}, {1}, 0};
  const double c = projection_normalization(p);
  CHECK(c == doctest::Approx(1.0 / (2.0 * pi)));
  TwistedKernel K = projection_kernel({{0}}, p, c);

  // k=0: K(x,y) = c e^{-|x-y|^2/4} e^{(i/2) omega(x,y)}
  double x[2] = {0.7, -0.3}, y[2] = {-0.2, 0.5};
  double d2 = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
  double omega = x[0] * y[1] - x[1] * y[0];
  cd expected = c * std::exp(-0.25 * d2) *
                cd(std::cos(0.5 * omega), std::sin(0.5 * omega));
  CHECK(std::abs(K.eval(x, y) - expected) < 1e-14);

  // diagonal value c * prod b^r binom(k+r-1, k)
  BlockParams p2{{2.0, 0.5}, {2, 1}, 0};
  TwistedKernel K2 = projection_kernel({{3, 1}}, p2, 1.0);
  CHECK(K2.diagonal() ==
        doctest::Approx(std::pow(2.0, 2) * binomial(4, 3) * 0.5 * 1.0));
  double xx[6] = {0.1, 0.2, -0.3, 0.4, 0.5, -0.6};
  CHECK(std::abs(K2.eval(xx, xx) - cd(K2.diagonal(), 0.0)) < 1e-12);

  // Hermitian symmetry at random points
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    double a[2] = {g(rng), g(rng)}, b[2] = {g(rng), g(rng)};
    CHECK(std::abs(K.eval(a, b) - std::conj(K.eval(b, a))) < 1e-12);
  }

  BlockParams bad{{1.0}, {1}, 1};
  CHECK_THROWS_AS(projection_kernel({{0}}, bad, 1.0), config_error);
}
