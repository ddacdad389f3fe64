#include <doctest.h>

#include <random>

#include "subspec/symplectic.hpp"

using namespace subspec;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

double all_residuals(const MuDecomposition& d) {
  return std::max({d.spectral_residual, d.symplectic_residual,
                   d.rotation_residual, d.projector_residual});
}

}  // namespace

TEST_CASE("decompose h1 at mu=2") {
  MuDecomposition d = decompose(preset_heisenberg(1), vec1(2.0));
  REQUIRE(d.b.size() == 1);
  CHECK(d.b[0] == doctest::Approx(2.0));
  CHECK(d.r == std::vector<int>{1});
  CHECK(d.r0 == 0);
  CHECK((d.projections[1] - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(all_residuals(d) < 1e-10);
}

TEST_CASE("decompose free-n32: radical along mu") {
  MuDecomposition d = decompose(preset_free_n32(), vec3(0, 0, 1));
  REQUIRE(d.b.size() == 1);
  CHECK(d.b[0] == doctest::Approx(1.0));
  CHECK(d.r0 == 1);
  Matrix P1_expected = Matrix::Zero(3, 3);
  P1_expected(0, 0) = 1;
  P1_expected(1, 1) = 1;
  CHECK((d.projections[1] - P1_expected).norm() < 1e-12);
  Matrix P0_expected = Matrix::Zero(3, 3);
  P0_expected(2, 2) = 1;
  CHECK((d.projections[0] - P0_expected).norm() < 1e-12);

  // oracle: -J_mu^2 = |mu|^2 I - mu mu^T for the cross-product structure
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Vector mu = vec3(g(rng), g(rng), g(rng));
    Matrix J = j_of_mu(preset_free_n32(), mu);
    Matrix S = -J * J;
    Matrix oracle = mu.squaredNorm() * Matrix::Identity(3, 3) -
                    mu * mu.transpose();
    CHECK((S - oracle).cwiseAbs().maxCoeff() < 1e-12);
    MuDecomposition dd = decompose(preset_free_n32(), mu);
    CHECK(dd.r0 == 1);
    CHECK(dd.b[0] == doctest::Approx(mu.norm()));
  }
}

TEST_CASE("decompose metivier-aniso(1,3): two blocks, decreasing b") {
  MuDecomposition d = decompose(preset_metivier_aniso(1, 3), vec1(1.0));
  REQUIRE(d.b.size() == 2);
  CHECK(d.b[0] == doctest::Approx(3.0));
  CHECK(d.b[1] == doctest::Approx(1.0));
  CHECK(d.r == std::vector<int>{1, 1});
  CHECK(d.r0 == 0);
  CHECK(all_residuals(d) < 1e-10);
}

TEST_CASE("decompose htype-quaternion: one block of multiplicity 2") {
  MuDecomposition d = decompose(preset_htype_quaternion(), vec3(0.3, -0.2, 0.9));
  REQUIRE(d.b.size() == 1);
  CHECK(d.r == std::vector<int>{2});
  CHECK(d.r0 == 0);
  CHECK(d.b[0] == doctest::Approx(vec3(0.3, -0.2, 0.9).norm()));
  CHECK(all_residuals(d) < 1e-9);
}

TEST_CASE("decompose invariants over random mu on all presets") {
  std::vector<GroupSpec> presets = {preset_heisenberg(1), preset_heisenberg(2),
                                    preset_htype_quaternion(),
                                    preset_metivier_aniso(1, 3),
                                    preset_free_n32()};
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const GroupSpec& spec : presets) {
    std::vector<int> first_sig;
    int first_r0 = -1;
    for (int t = 0; t < 25; ++t) {
      Vector mu(spec.d2);
      do {
        for (int i = 0; i < spec.d2; ++i) mu(i) = g(rng);
      } while (mu.norm() < 1e-6);
      MuDecomposition d = decompose(spec, mu);
      CHECK(all_residuals(d) < 1e-8);
      // signature is constant on each preset
      if (first_r0 < 0) {
        first_sig = d.r;
        first_r0 = d.r0;
      } else {
        CHECK(d.r == first_sig);
        CHECK(d.r0 == first_r0);
      }
      int dim = d.r0;
      for (int rn : d.r) dim += 2 * rn;
      CHECK(dim == spec.d1);
      for (std::size_t n = 0; n + 1 < d.b.size(); ++n) CHECK(d.b[n] > d.b[n + 1]);
    }
  }
}

TEST_CASE("decompose error paths") {
  CHECK_THROWS_AS(decompose(preset_heisenberg(1), vec1(0.0)), config_error);
  CHECK_THROWS_AS(decompose(preset_heisenberg(1), vec1(1.0), 0.0), config_error);
  // J_mu = 0 for mu != 0 (degenerate bracket) has no positive spectrum
  GroupSpec degenerate;
  degenerate.d1 = 2;
  degenerate.d2 = 1;
  degenerate.structure = {Matrix::Zero(2, 2)};
  CHECK_THROWS_AS(decompose(degenerate, vec1(1.0)), numeric_error);
}

TEST_CASE("homogeneity of b and projections") {
  auto rep = check_homogeneity(preset_heisenberg(1), vec1(1.0), 2.0);
  CHECK(rep.signature_match);
  CHECK(rep.b_residual < 1e-12);
  CHECK(rep.p_residual < 1e-12);

  rep = check_homogeneity(preset_metivier_aniso(1, 3), vec1(1.0), 0.5);
  CHECK(rep.signature_match);
  CHECK(rep.b_residual < 1e-12);

  rep = check_homogeneity(preset_free_n32(), vec3(0, 0, 1), 3.0);
  CHECK(rep.signature_match);
  CHECK(rep.b_residual < 1e-10);
  CHECK(rep.p_residual < 1e-10);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> s_dist(0.1, 10.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Vector mu = vec3(g(rng), g(rng), g(rng));
    auto r = check_homogeneity(preset_htype_quaternion(), mu, s_dist(rng));
    CHECK(r.signature_match);
    CHECK(r.b_residual < 1e-8);
    CHECK(r.p_residual < 1e-8);
  }

  CHECK_THROWS_AS(check_homogeneity(preset_heisenberg(1), vec1(1.0), 0.0),
                  config_error);
}

TEST_CASE("conjugation residual is O(h^2)") {
  double r_h1 = conjugation_residual(preset_heisenberg(1), vec1(1.0), 0.05);
  CHECK(r_h1 < 5e-3);

  double r_met = conjugation_residual(preset_metivier_aniso(1, 3), vec1(1.0), 0.05);
  CHECK(r_met < 5e-3);

  // a generic rotation appears for the quaternion preset, so the two
  // difference stencils genuinely disagree at O(h^2) there
  Vector mu = vec3(0.3, -0.5, 0.81);
  double r_fine = conjugation_residual(preset_htype_quaternion(), mu, 0.05);
  double r_coarse = conjugation_residual(preset_htype_quaternion(), mu, 0.1);
  CHECK(r_fine < 5e-3);
  CHECK(r_coarse > 2.0 * r_fine);
  CHECK(r_coarse < 8.0 * r_fine);

  CHECK_THROWS_AS(conjugation_residual(preset_heisenberg(1), vec1(0.0), 0.05),
                  config_error);
  CHECK_THROWS_AS(conjugation_residual(preset_heisenberg(1), vec1(1.0), 0.6),
                  config_error);
}

TEST_CASE("decomposition json serialization") {
  MuDecomposition d = decompose(preset_metivier_aniso(1, 3), vec1(2.0));
  std::string js = decomposition_to_json(d, false);
  CHECK(js.find("\"b\"") != std::string::npos);
  CHECK(js.find("projections") == std::string::npos);
  std::string js2 = decomposition_to_json(d, true);
  CHECK(js2.find("projections") != std::string::npos);
  CHECK(js2.size() > js.size());
}
