#include <doctest.h>

#include <cmath>

#include "subspec/twisted.hpp"

using namespace subspec;

namespace {

Field phi_field(const Grid& g, int k, double b) {
  return sample_field(g, [&](const double* x) {
    return cd(phi_radial(k, b, 1, x[0] * x[0] + x[1] * x[1]), 0.0);
  });
}

double rel_l2_diff(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("twisted convolution with a discrete delta returns f") {
  Grid g = Grid::centered(2, 32, 6.0);
  BlockParams p{{1.0}, {1}, 0};
  Field f = phi_field(g, 0, 1.0);
  Field delta(g);
  // mass 1: value 1/h^2 at the origin node (E(y, 0) = 1)
  delta.values[std::size_t(g.n / 2) * g.n + g.n / 2] = cd(1.0 / g.weight(), 0.0);
  Field out = twisted_convolution(f, delta, p);
  // out(y) = f(z) delta(y - z): the delta sits at index n/2 so y - z = y
  CHECK(rel_l2_diff(out, f) < 1e-12);
}

TEST_CASE("small twist approaches the ordinary convolution") {
  Grid g = Grid::centered(2, 32, 6.0);
  BlockParams tiny{{1e-9}, {1}, 0};
  Field f = sample_field(g, [](const double* x) {
    return cd(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])), 0.0);
  });
  Field tw = twisted_convolution(f, f, tiny);
  // ordinary convolution by direct quadrature
  Field ord(g);
  const int n = g.n;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      cd acc = 0.0;
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
          int d1 = i1 - j1 + n / 2, d2 = i2 - j2 + n / 2;
          if (d1 < 0 || d1 >= n || d2 < 0 || d2 >= n) continue;
          acc += f.values[std::size_t(j1) * n + j2] *
                 f.values[std::size_t(d1) * n + d2];
        }
      ord.values[std::size_t(i1) * n + i2] = acc * g.weight();
    }
  CHECK(rel_l2_diff(tw, ord) < 1e-8);
}

TEST_CASE("oracle: phi_0 x phi_0 = 2 pi phi_0 fixes the normalization") {
  // high-resolution quadrature run before freezing c = (2 pi)^{-sum r}
  Grid g = Grid::centered(2, 96, 12.0);
  BlockParams p{{1.0}, {1}, 0};
  Field f = phi_field(g, 0, 1.0);
  Field conv = twisted_convolution(f, f, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < conv.values.size(); ++i)
    worst = std::max(worst,
                     std::abs(conv.values[i] - 2.0 * pi * f.values[i]));
  CHECK(worst < 1e-6);
  // so c = 1/(2 pi) makes P_0 idempotent
  CHECK(projection_normalization(p) == doctest::Approx(1.0 / (2.0 * pi)));
}

TEST_CASE("projection idempotency and orthogonality on the 64^2 grid") {
  Grid g = Grid::centered(2, 64, 8.0);
  BlockParams p{{1.0}, {1}, 0};
  const double c = projection_normalization(p);
  Field f = sample_field(g, [](const double* x) {
    double q = x[0] * x[0] + x[1] * x[1];
    return cd(std::exp(-0.3 * q) * (1.0 + 0.2 * x[0]),
              0.1 * x[1] * std::exp(-0.4 * q));
  });
  const double fn = f.norm2();

  std::vector<Field> proj;
  for (int k = 0; k <= 5; ++k)
    proj.push_back(apply_projection(f, projection_kernel({{k}}, p, c)));

  for (int k = 0; k <= 5; ++k) {
    Field twice = apply_projection(proj[std::size_t(k)],
                                   projection_kernel({{k}}, p, c));
    double num = 0.0;
    for (std::size_t i = 0; i < twice.values.size(); ++i)
      num += std::norm(twice.values[i] - proj[std::size_t(k)].values[i]);
    CHECK(std::sqrt(num * g.weight()) <= 1e-6 * fn);
  }
  for (int k = 0; k < 5; ++k) {
    Field cross = apply_projection(proj[std::size_t(k + 1)],
                                   projection_kernel({{k}}, p, c));
    CHECK(cross.norm2() <= 1e-6 * fn);
  }
}

TEST_CASE("twisted laplacian eigenrelation at O(h^2)") {
  Grid g = Grid::centered(2, 320, 8.0);  // h = 0.05
  BlockParams p{{1.0}, {1}, 0};
  for (int k : {0, 2}) {
    Field fk = phi_field(g, k, 1.0);
    Field lap = apply_twisted_laplacian(fk, p);
    double num = 0.0, den = 0.0;
    double lam = 2.0 * k + 1.0;
    for (std::size_t i = 0; i < fk.values.size(); ++i) {
      num += std::norm(lap.values[i] - lam * fk.values[i]);
      den += std::norm(lam * fk.values[i]);
    }
    CHECK(std::sqrt(num / den) < 5e-3);
  }

  // b = 0 reduces to the plain Laplacian on a Gaussian
  BlockParams zero{{0.0}, {1}, 0};
  Field gau = sample_field(g, [](const double* x) {
    return cd(std::exp(-0.25 * (x[0] * x[0] + x[1] * x[1])), 0.0);
  });
  Field lap = apply_twisted_laplacian(gau, zero);
  double num = 0.0, den = 0.0;
  for (int i1 = 40; i1 < 280; ++i1)
    for (int i2 = 40; i2 < 280; ++i2) {
      double x = g.coord(i1), y = g.coord(i2);
      double q = x * x + y * y;
      cd exact = cd(-(0.25 * q - 1.0) * std::exp(-0.25 * q), 0.0);
      cd got = lap.values[std::size_t(i1) * g.n + i2];
      num += std::norm(got - exact);
      den += std::norm(exact);
    }
  CHECK(std::sqrt(num / den) < 5e-4);

  Grid coarse = Grid::centered(2, 32, 8.0);
  Field fc = phi_field(coarse, 0, 1.0);
  CHECK_THROWS_AS(apply_twisted_laplacian(fc, p), config_error);
}

TEST_CASE("fast 2D path agrees with the direct per-pair loop") {
  Grid g = Grid::centered(2, 20, 5.0);
  BlockParams p{{1.3}, {1}, 0};
  Field f = sample_field(g, [](const double* x) {
    return cd(std::exp(-0.4 * (x[0] * x[0] + x[1] * x[1])),
              0.3 * x[0] * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])));
  });
  auto kernel = [&](const double* d) {
    return cd(phi_radial(1, 1.3, 1, d[0] * d[0] + d[1] * d[1]), 0.0);
  };
  // fast path
  Field fast = twisted_convolution_kernel(f, p, kernel);
  // direct reference with explicit twist factor
  Field ref(g);
  const int n = g.n;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double y[2] = {g.coord(i1), g.coord(i2)};
      cd acc = 0.0;
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
          double z[2] = {g.coord(j1), g.coord(j2)};
          double diff[2] = {y[0] - z[0], y[1] - z[1]};
          acc += f.values[std::size_t(j1) * n + j2] * kernel(diff) *
                 twist_factor(p, y, z);
        }
      ref.values[std::size_t(i1) * n + i2] = acc * g.weight();
    }
  CHECK(rel_l2_diff(fast, ref) < 1e-12);
}

TEST_CASE("grid errors") {
  Grid g = Grid::centered(2, 16, 4.0);
  Grid g2 = Grid::centered(2, 18, 4.0);
  BlockParams p{{1.0}, {1}, 0};
  Field a(g), b(g2);
  CHECK_THROWS_AS(twisted_convolution(a, b, p), config_error);
  BlockParams rad{{1.0}, {1}, 1};
  CHECK_THROWS_AS(twisted_convolution(a, a, rad), config_error);
}
