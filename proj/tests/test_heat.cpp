#include <doctest.h>

#include <cmath>

#include "subspec/heat.hpp"
#include "subspec/twisted.hpp"

using namespace subspec;

TEST_CASE("S and T special values") {
  CHECK(s_fn(cd(0.0, 0.0)) == cd(1.0, 0.0));
  CHECK(t_fn(cd(0.0, 0.0)) == cd(1.0, 0.0));
  // sin(i) = i sinh 1, tan(i) = i tanh 1
  CHECK(std::abs(s_fn(cd(0.0, 1.0)) - cd(1.0 / std::sinh(1.0), 0.0)) < 1e-12);
  CHECK(std::abs(t_fn(cd(0.0, 1.0)) - cd(1.0 / std::tanh(1.0), 0.0)) < 1e-12);
  CHECK(std::abs(s_fn(cd(0.5 * pi, 0.0)) - cd(0.5 * pi, 0.0)) < 1e-12);
  CHECK(std::abs(t_fn(cd(0.5 * pi, 0.0))) < 1e-12);
  // Taylor branch continuity
  CHECK(std::abs(s_fn(cd(9e-5, 0.0)) - s_fn(cd(1.1e-4, 0.0))) < 1e-9);
  CHECK_THROWS_AS(s_fn(cd(pi, 0.0)), numeric_error);
  CHECK_THROWS_AS(t_fn(cd(2.0 * pi, 1e-10)), numeric_error);
}

TEST_CASE("heat kernel closed forms") {
  // all frequencies zero: plain Gaussian
  BlockParams zero{{0.0, 0.0}, {1, 1}, 1};  // d1 = 5
  double x[5] = {0.4, -0.3, 0.2, 0.1, -0.5};
  double t = 0.7, x2 = 0.0;
  for (double v : x) x2 += v * v;
  cd expect = std::pow(4.0 * pi * t, -2.5) * std::exp(-x2 / (4.0 * t));
  CHECK(std::abs(heat_kernel(cd(t, 0.0), zero, x) - expect) < 1e-14);

  // single block b=1, r=1 at the origin: (4 pi sinh t)^{-1}
  BlockParams p{{1.0}, {1}, 0};
  double origin[2] = {0.0, 0.0};
  CHECK(std::abs(heat_kernel(cd(1.0, 0.0), p, origin) -
                 cd(1.0 / (4.0 * pi * std::sinh(1.0)), 0.0)) < 1e-12);
  CHECK(heat_kernel(cd(1.0, 0.0), p, origin).real() ==
        doctest::Approx(0.067713).epsilon(1e-4));

  // general point: (4 pi sinh t)^{-1} exp(-coth(t) |z|^2/4), checked
  // against the eigen-expansion truncated at lambda <= 60
  double z[2] = {0.6, 0.8};
  double tt = 0.5;
  cd mehler = heat_kernel(cd(tt, 0.0), p, z);
  cd analytic = std::exp(-0.25 / std::tanh(tt)) / (4.0 * pi * std::sinh(tt));
  CHECK(std::abs(mehler - analytic) < 1e-12);
  double eig = 0.0;
  const double c = projection_normalization(p);
  for (int k = 0; 2 * k + 1 <= 60; ++k)
    eig += std::exp(-tt * (2.0 * k + 1.0)) * c * phi_radial(k, 1.0, 1, 1.0);
  CHECK(std::abs(mehler - cd(eig, 0.0)) < 1e-12);

  CHECK_THROWS_AS(heat_kernel(cd(-1.0, 0.0), p, origin), numeric_error);
}

TEST_CASE("mehler kernel vs eigen-expansion sup over the grid") {
  Grid g = Grid::centered(2, 64, 8.0);
  BlockParams p{{1.0}, {1}, 0};
  const double t = 0.5;
  const double c = projection_normalization(p);
  double sup = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double x[2] = {g.coord(i), g.coord(j)};
      double r2 = x[0] * x[0] + x[1] * x[1];
      cd mehler = heat_kernel(cd(t, 0.0), p, x);
      double eig = 0.0;
      for (int k = 0; 2 * k + 1 <= 40; ++k)
        eig += std::exp(-t * (2.0 * k + 1.0)) * c * phi_radial(k, 1.0, 1, r2);
      sup = std::max(sup, std::abs(mehler - cd(eig, 0.0)));
    }
  CHECK(sup <= 1e-8);
}

TEST_CASE("heat apply: identity limit, eigen decay, semigroup") {
  Grid g = Grid::centered(2, 64, 8.0);
  BlockParams p{{1.0}, {1}, 0};

  Field phi0 = sample_field(g, [](const double* x) {
    return cd(phi_radial(0, 1.0, 1, x[0] * x[0] + x[1] * x[1]), 0.0);
  });

  // zeta -> 0+ recovers the identity within 2%
  Field near_id = heat_apply(phi0, cd(1e-3, 0.0), p);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phi0.values.size(); ++i) {
    num += std::norm(near_id.values[i] - phi0.values[i]);
    den += std::norm(phi0.values[i]);
  }
  CHECK(std::sqrt(num / den) <= 0.02);

  // eigenfunction decay e^{-t lambda_0}
  Field decayed = heat_apply(phi0, cd(1.0, 0.0), p);
  num = den = 0.0;
  for (std::size_t i = 0; i < phi0.values.size(); ++i) {
    num += std::norm(decayed.values[i] - std::exp(-1.0) * phi0.values[i]);
    den += std::norm(std::exp(-1.0) * phi0.values[i]);
  }
  CHECK(std::sqrt(num / den) <= 1e-4);

  // semigroup law
  Field f = sample_field(g, [](const double* x) {
    double q = x[0] * x[0] + x[1] * x[1];
    return cd(std::exp(-0.3 * q), 0.1 * x[0] * std::exp(-0.4 * q));
  });
  for (auto [t1, t2] : {std::pair{0.3, 0.2}, std::pair{0.5, 0.5}}) {
    Field two = heat_apply(heat_apply(f, cd(t1, 0.0), p), cd(t2, 0.0), p);
    Field one = heat_apply(f, cd(t1 + t2, 0.0), p);
    num = den = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      num += std::norm(two.values[i] - one.values[i]);
      den += std::norm(one.values[i]);
    }
    CHECK(std::sqrt(num / den) <= 1e-6);
  }
}

TEST_CASE("dispersive scan") {
  // all-zero frequencies: the constant is exactly (4 pi)^{-d1/2}
  BlockParams zero{{0.0}, {1}, 0};
  DispersiveReport rep = dispersive_scan(zero, 0.5, 32, 7);
  CHECK(rep.max_constant == doctest::Approx(std::pow(4.0 * pi, -1.0)));
  CHECK(rep.sup_at_origin_ok);

  // b=1, r=1: on real times t/(4 pi sinh t) <= (4 pi)^{-1}
  BlockParams p{{1.0}, {1}, 0};
  DispersiveReport rp = dispersive_scan(p, 0.5, 64, 7);
  CHECK(rp.max_constant <= 1.0 / (4.0 * pi) + 1e-12);
  CHECK(rp.sup_at_origin_ok);
  for (const auto& s : rp.samples) CHECK(std::isfinite(s.bound_value));

  // blow-up trend as Im zeta approaches the pole at pi/b
  double prev = 0.0;
  for (double im : {2.0, 2.6, 2.9, 3.05, 3.13}) {
    double origin[2] = {0.0, 0.0};
    double v = std::abs(heat_kernel(cd(0.01, im), p, origin)) *
               std::pow(std::abs(cd(0.01, im)), 1.0);
    CHECK(v > prev);
    prev = v;
  }

  CHECK_THROWS_AS(dispersive_scan(p, 3.2, 8, 1), config_error);
}

TEST_CASE("fejer pair values, positivity, fourier transform") {
  CHECK(fejer_F(0, 0.0) == doctest::Approx(1.0 / (3.0 * pi)).epsilon(1e-12));
  CHECK(fejer_F(7, 7.0) == doctest::Approx(0.106103).epsilon(1e-4));
  CHECK(fejer_F(0, pi) == doctest::Approx(2.0 / (pi * pi * pi)).epsilon(1e-12));
  CHECK(fejer_F(3, 3.0 + pi) == doctest::Approx(0.064510).epsilon(1e-4));
  // positive on a long grid
  for (int i = 0; i < 10000; ++i) {
    double lam = -50.0 + i * 0.01;
    CHECK(fejer_F(0, lam) > 0.0);
  }
  // continuity across the Taylor switch
  CHECK(std::abs(fejer_F(0, 9e-4) - fejer_F(0, 1.1e-3)) < 1e-9);

  CHECK(fejer_fourier_check(0) <= 1e-4);
  CHECK(fejer_fourier_check(3) <= 1e-4);
}
