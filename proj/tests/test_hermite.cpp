#include <doctest.h>

#include <cmath>

#include "subspec/hermite.hpp"
#include "subspec/laguerre.hpp"
#include "subspec/twisted.hpp"

using namespace subspec;

TEST_CASE("gauss-hermite integrates gaussian moments") {
  std::vector<double> s, w;
  gauss_hermite(24, s, w);
  double m0 = 0.0, m2 = 0.0;
  for (int i = 0; i < 24; ++i) {
    m0 += w[i];
    m2 += w[i] * s[i] * s[i];
  }
  CHECK(m0 == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(0.5 * std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("hermite functions are orthonormal") {
  std::vector<double> s, w;
  gauss_hermite(40, s, w);
  for (int a = 0; a < 5; ++a)
    for (int b = a; b < 5; ++b) {
      double acc = 0.0;
      for (std::size_t q = 0; q < s.size(); ++q)
        acc += w[q] * std::exp(s[q] * s[q]) * hermite_function(a, s[q]) *
               hermite_function(b, s[q]);
      CHECK(acc == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("special hermite ground state value") {
  cd v = special_hermite({0}, {0}, 1.0, {0.0, 0.0});
  CHECK(v.real() == doctest::Approx(1.0 / std::sqrt(2.0 * pi)).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(0.0));
}

TEST_CASE("identity: phi_k = (2 pi)^{1/2} sum_{|nu|=k} Phi_{nu,nu} at m=1") {
  const double pts[4][2] = {{0.0, 0.0}, {0.3, -0.7}, {1.1, 0.4}, {-0.8, -0.9}};
  for (int k : {0, 1, 2, 4}) {
    for (const auto& z : pts) {
      cd lhs = std::sqrt(2.0 * pi) * special_hermite({k}, {k}, 1.0, {z[0], z[1]});
      double rhs = phi_radial(k, 1.0, 1, z[0] * z[0] + z[1] * z[1]);
      CHECK(std::abs(lhs - cd(rhs, 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("orthonormality of Phi_{0,0} over R^2 by quadrature") {
  Grid g = Grid::centered(2, 64, 8.0);
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      acc += std::norm(special_hermite({0}, {0}, 1.0, {g.coord(i), g.coord(j)}));
  CHECK(acc * g.weight() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("closed form matches the quadrature route") {
  const double pts[3][2] = {{0.4, 0.2}, {-1.3, 0.8}, {2.1, -1.7}};
  for (double lambda : {1.0, 0.5, 2.5}) {
    for (int a = 0; a <= 5; ++a)
      for (int b = 0; b <= 5; ++b)
        for (const auto& z : pts) {
          cd quad = special_hermite({a}, {b}, lambda, {z[0], z[1]});
          cd closed = special_hermite_m1(a, b, lambda, z[0], z[1]);
          CHECK(std::abs(quad - closed) < 1e-9);
        }
  }
}

TEST_CASE("Phi_{alpha,k} are eigenvectors of the grid projection P_k") {
  // orientation check: the twisted convolution with c phi_k must fix
  // Phi_{alpha,k} (second index selects the spectral level)
  Grid g = Grid::centered(2, 48, 9.0);
  BlockParams p{{1.0}, {1}, 0};
  const double c = projection_normalization(p);
  for (auto [a, k] : {std::pair{0, 1}, std::pair{2, 1}, std::pair{1, 3}}) {
    Field f = sample_field(g, [&](const double* x) {
      return special_hermite_m1(a, k, 1.0, x[0], x[1]);
    });
    Field pf = apply_projection(f, projection_kernel({{k}}, p, c));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      num += std::norm(pf.values[i] - f.values[i]);
      den += std::norm(f.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
    // and the neighboring projection annihilates it
    Field qf = apply_projection(f, projection_kernel({{k + 1}}, p, c));
    CHECK(qf.norm2() < 1e-6 * f.norm2());
  }
}

TEST_CASE("special hermite error paths") {
  CHECK_THROWS_AS(special_hermite({0}, {0}, 0.0, {0.0, 0.0}), config_error);
  CHECK_THROWS_AS(special_hermite({0}, {0, 1}, 1.0, {0.0, 0.0}), config_error);
  CHECK_THROWS_AS(special_hermite({8}, {8}, 1.0, {0.0, 0.0}, 20), config_error);
  CHECK_THROWS_AS(special_hermite({0}, {0}, 1.0, {40.0, 40.0}), config_error);
}
