#include "subspec/symplectic.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>
#include <sstream>

namespace subspec {

namespace {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Pivoted modified Gram-Schmidt: orthonormalize `count` columns chosen
// greedily by descending residual norm, smallest index on ties.
std::vector<CVector> pivoted_gram_schmidt(CMatrix cols, int count) {
  std::vector<CVector> basis;
  std::vector<bool> used(cols.cols(), false);
  for (int t = 0; t < count; ++t) {
    int best = -1;
    double best_norm = -1.0;
    for (int j = 0; j < cols.cols(); ++j) {
      if (used[j]) continue;
      double nj = cols.col(j).norm();
      if (nj > best_norm * (1.0 + 1e-12)) {
        best_norm = nj;
        best = j;
      }
    }
    if (best < 0 || best_norm < 1e-12)
      throw numeric_error("pivoted Gram-Schmidt: rank deficiency while "
                          "selecting block basis");
    used[best] = true;
    CVector w = cols.col(best) / best_norm;
    for (int j = 0; j < cols.cols(); ++j) {
      if (used[j]) continue;
      cols.col(j) -= w * (w.adjoint() * cols.col(j));
    }
    basis.push_back(w);
  }
  return basis;
}

Matrix standard_symplectic(int two_r) {
  int r = two_r / 2;
  Matrix J = Matrix::Zero(two_r, two_r);
  J.topRightCorner(r, r) = -Matrix::Identity(r, r);
  J.bottomLeftCorner(r, r) = Matrix::Identity(r, r);
  return J;
}

// omega_mu on the candidate block columns vs b * omega_std
double symplectic_block_residual(const Matrix& J, const Matrix& cols, double b) {
  int two_r = int(cols.cols());
  Matrix Jstd = standard_symplectic(two_r);
  double res = 0.0;
  for (int a = 0; a < two_r; ++a)
    for (int c = 0; c < two_r; ++c) {
      double omega = (J * cols.col(a)).dot(cols.col(c));
      double target = b * (Jstd * Matrix::Identity(two_r, two_r).col(a))
                              .dot(Matrix::Identity(two_r, two_r).col(c));
      res = std::max(res, std::abs(omega - target));
    }
  return res;
}

struct Block {
  double b = 0.0;
  int r = 0;
  Matrix columns;  // d1 x 2r, orthonormal, symplectically normalized
};

}  // namespace

MuDecomposition decompose(const GroupSpec& spec, const Vector& mu,
                          double cluster_tol) {
  if (mu.size() != spec.d2) throw config_error("decompose: mu has wrong length");
  if (mu.norm() == 0.0) throw config_error("decompose: mu must be nonzero");
  if (cluster_tol <= 0.0) throw config_error("decompose: cluster_tol must be > 0");

  const int d1 = spec.d1;
  const Matrix J = j_of_mu(spec, mu);
  Matrix S = -J * J;
  S = 0.5 * (S + S.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success)
    throw numeric_error("decompose: eigensolver failed");
  Vector lam = es.eigenvalues();   // ascending
  Matrix V = es.eigenvectors();

  const double lam_max = lam(d1 - 1);
  if (lam_max <= 0.0)
    throw numeric_error("decompose: -J_mu^2 has no positive spectrum "
                        "(J_mu = 0 for nonzero mu?)");
  // radical cutoff relative to the top eigenvalue so the split is
  // invariant under mu -> s*mu
  const double rad_cut = cluster_tol * cluster_tol * lam_max;

  std::vector<int> radical_idx;
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < d1; ++i) {
    if (lam(i) < rad_cut) {
      radical_idx.push_back(i);
      continue;
    }
    if (groups.empty() ||
        (lam(i) - lam(groups.back().back())) / lam(i) >= cluster_tol)
      groups.emplace_back();
    groups.back().push_back(i);
  }

  std::vector<Block> blocks;
  for (const auto& g : groups) {
    if (g.size() % 2 != 0) {
      std::ostringstream msg;
      msg << "decompose: eigenvalue group of odd dimension " << g.size()
          << " (inconsistent clustering); spectrum:";
      for (int i = 0; i < d1; ++i) msg << " " << lam(i);
      throw numeric_error(msg.str());
    }
    Block blk;
    blk.r = int(g.size()) / 2;
    double mean = 0.0;
    for (int i : g) mean += lam(i);
    mean /= double(g.size());
    blk.b = std::sqrt(mean);

    Matrix Vg(d1, g.size());
    for (size_t c = 0; c < g.size(); ++c) Vg.col(c) = V.col(g[c]);

    // complexified spectral projection onto the -i*b eigenspace of
    // J restricted to the group subspace
    Matrix A = Vg.transpose() * J * Vg;
    const int two_r = 2 * blk.r;
    CMatrix P_plus = 0.5 * (CMatrix::Identity(two_r, two_r) +
                            cd(0.0, 1.0) / blk.b * A.cast<cd>());
    std::vector<CVector> w = pivoted_gram_schmidt(P_plus, blk.r);

    Matrix cols_re_im(d1, two_r), cols_im_re(d1, two_r);
    const double sqrt2 = std::sqrt(2.0);
    for (int j = 0; j < blk.r; ++j) {
      Vector re = sqrt2 * (Vg * w[j].real());
      Vector im = sqrt2 * (Vg * w[j].imag());
      cols_re_im.col(j) = re;
      cols_re_im.col(blk.r + j) = im;
      cols_im_re.col(j) = im;
      cols_im_re.col(blk.r + j) = re;
    }
    double res1 = symplectic_block_residual(J, cols_re_im, blk.b);
    double res2 = symplectic_block_residual(J, cols_im_re, blk.b);
    blk.columns = res1 <= res2 ? cols_re_im : cols_im_re;
    double res = std::min(res1, res2);
    double allowed = blk.b * std::max(1e-8, 20.0 * cluster_tol * two_r);
    if (res > allowed) {
      std::ostringstream msg;
      msg << "decompose: symplectic normalization failed on block b=" << blk.b
          << " with residual " << res << " under both sign conventions";
      throw numeric_error(msg.str());
    }
    blocks.push_back(std::move(blk));
  }

  // blocks by strictly decreasing frequency
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& a, const Block& b) { return a.b > b.b; });

  // deterministic radical basis: order by dominant coordinate, fix sign
  Matrix V0(d1, radical_idx.size());
  {
    std::vector<Vector> vecs;
    for (int i : radical_idx) vecs.push_back(V.col(i));
    auto dominant = [](const Vector& v) {
      int arg = 0;
      for (int i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
      return arg;
    };
    std::stable_sort(vecs.begin(), vecs.end(),
                     [&](const Vector& a, const Vector& b) {
                       return dominant(a) < dominant(b);
                     });
    for (size_t c = 0; c < vecs.size(); ++c) {
      Vector v = vecs[c];
      if (v(dominant(v)) < 0) v = -v;
      V0.col(c) = v;
    }
  }

  MuDecomposition dec;
  dec.mu = mu;
  dec.r0 = int(radical_idx.size());
  dec.cluster_tol = cluster_tol;
  dec.rotation = Matrix::Zero(d1, d1);

  int col = 0;
  for (int c = 0; c < V0.cols(); ++c) dec.rotation.col(col++) = V0.col(c);
  dec.projections.push_back(V0 * V0.transpose());
  for (const Block& blk : blocks) {
    dec.b.push_back(blk.b);
    dec.r.push_back(blk.r);
    for (int c = 0; c < blk.columns.cols(); ++c)
      dec.rotation.col(col++) = blk.columns.col(c);
    dec.projections.push_back(blk.columns * blk.columns.transpose());
    dec.symplectic_residual =
        std::max(dec.symplectic_residual,
                 symplectic_block_residual(J, blk.columns, blk.b));
  }

  // residual bookkeeping
  const Matrix I = Matrix::Identity(d1, d1);
  Matrix recon = Matrix::Zero(d1, d1);
  Matrix psum = Matrix::Zero(d1, d1);
  for (size_t n = 0; n < dec.projections.size(); ++n) {
    const Matrix& P = dec.projections[n];
    dec.projector_residual =
        std::max(dec.projector_residual, (P * P - P).norm());
    psum += P;
    if (n >= 1) recon += dec.b[n - 1] * dec.b[n - 1] * P;
    for (size_t m = n + 1; m < dec.projections.size(); ++m)
      dec.projector_residual =
          std::max(dec.projector_residual, (P * dec.projections[m]).norm());
  }
  dec.projector_residual = std::max(dec.projector_residual, (psum - I).norm());
  dec.spectral_residual = (-J * J - recon).norm();
  dec.rotation_residual =
      (dec.rotation.transpose() * dec.rotation - I).norm();
  return dec;
}

HomogeneityReport check_homogeneity(const GroupSpec& spec, const Vector& mu,
                                    double s, double cluster_tol) {
  if (s <= 0.0) throw config_error("check_homogeneity: s must be positive");
  MuDecomposition d1 = decompose(spec, mu, cluster_tol);
  MuDecomposition d2 = decompose(spec, Vector(s * mu), cluster_tol);

  HomogeneityReport rep;
  if (d1.b.size() != d2.b.size() || d1.r != d2.r || d1.r0 != d2.r0) {
    rep.signature_match = false;
    rep.message = "signature mismatch between mu and s*mu (mu may be close "
                  "to the degenerate set)";
    return rep;
  }
  rep.signature_match = true;
  for (size_t n = 0; n < d1.b.size(); ++n) {
    rep.b_residual = std::max(
        rep.b_residual, std::abs(d2.b[n] - s * d1.b[n]) / (s * d1.b[n]));
  }
  for (size_t n = 0; n < d1.projections.size(); ++n)
    rep.p_residual = std::max(
        rep.p_residual, (d2.projections[n] - d1.projections[n]).norm());
  return rep;
}

namespace {

// smooth decaying test function with a mild asymmetric factor
double test_fn(const Vector& y) {
  static const double coef[8] = {0.31, -0.22, 0.17, 0.11, -0.07, 0.05, 0.03, -0.02};
  double lin = 1.0;
  for (int i = 0; i < y.size() && i < 8; ++i) lin += coef[i] * y(i);
  return std::exp(-0.25 * y.squaredNorm()) * lin;
}

// L^mu g at x: -Lap g + (1/4)|Jx|^2 g - i sum_j (Jx)_j d_j g, central differences
cd twisted_laplacian_fd(const std::function<double(const Vector&)>& g,
                        const Matrix& J, const Vector& x, double h) {
  const int d = int(x.size());
  double lap = 0.0;
  const double g0 = g(x);
  Vector Jx = J * x;
  cd first_order = 0.0;
  for (int j = 0; j < d; ++j) {
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    double gp = g(xp), gm = g(xm);
    lap += (gp - 2.0 * g0 + gm) / (h * h);
    first_order += cd(0.0, -1.0) * Jx(j) * (gp - gm) / (2.0 * h);
  }
  return -lap + 0.25 * Jx.squaredNorm() * g0 + first_order;
}

// anisotropic block operator at y, central differences; layout
// R^{r0} + R^{2r_1} + ... with [Re|Im] ordering inside each block
cd block_laplacian_fd(const std::function<double(const Vector&)>& g,
                      const std::vector<double>& b, const std::vector<int>& r,
                      int r0, const Vector& y, double h) {
  const int d = int(y.size());
  const double g0 = g(y);
  double lap = 0.0;
  std::vector<double> dg(d);
  for (int j = 0; j < d; ++j) {
    Vector yp = y, ym = y;
    yp(j) += h;
    ym(j) -= h;
    double gp = g(yp), gm = g(ym);
    lap += (gp - 2.0 * g0 + gm) / (h * h);
    dg[j] = (gp - gm) / (2.0 * h);
  }
  cd out = -lap;
  int off = r0;
  for (size_t n = 0; n < b.size(); ++n) {
    const int rn = r[n];
    double z2 = 0.0;
    for (int j = 0; j < 2 * rn; ++j) z2 += y(off + j) * y(off + j);
    out += 0.25 * b[n] * b[n] * z2 * g0;
    // omega_std(z, grad) with J_std = [[0,-I],[I,0]]:
    // (J_std z)_j = -z_{j+r} for j < r, z_{j-r} for j >= r
    cd fo = 0.0;
    for (int j = 0; j < rn; ++j) {
      fo += cd(0.0, -1.0) * (-y(off + rn + j)) * dg[off + j];
      fo += cd(0.0, -1.0) * (y(off + j)) * dg[off + rn + j];
    }
    out += b[n] * fo;
    off += 2 * rn;
  }
  return out;
}

}  // namespace

double conjugation_residual(const GroupSpec& spec, const Vector& mu, double h,
                            double cluster_tol) {
  if (mu.size() != spec.d2 || mu.norm() == 0.0)
    throw config_error("conjugation_residual: mu must be a nonzero covector");
  if (h > 0.5) throw config_error("conjugation_residual: grid too coarse (h > 0.5)");
  if (h <= 0.0) throw config_error("conjugation_residual: h must be positive");

  MuDecomposition dec = decompose(spec, mu, cluster_tol);
  const Matrix J = j_of_mu(spec, mu);
  const Matrix R = dec.rotation;
  const int d1 = spec.d1;

  auto phi = [](const Vector& y) { return test_fn(y); };
  auto f = [&R](const Vector& x) { return test_fn(R.transpose() * x); };

  // evaluation nodes: full uniform grid for d1 <= 2, seeded ball sample above
  std::vector<Vector> nodes;
  if (d1 <= 2) {
    const double L = 5.0;
    int n = int(std::floor(2.0 * L / h)) + 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < (d1 == 2 ? n : 1); ++j) {
        Vector y(d1);
        y(0) = -L + i * h;
        if (d1 == 2) y(1) = -L + j * h;
        nodes.push_back(y);
      }
  } else {
    std::mt19937_64 rng(0x5eedu);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    while (nodes.size() < 4096) {
      Vector y(d1);
      for (int i = 0; i < d1; ++i) y(i) = unif(rng);
      if (y.norm() <= 3.0) nodes.push_back(y);
    }
  }

  double num = 0.0, den = 0.0;
  for (const Vector& y : nodes) {
    cd lhs = twisted_laplacian_fd(f, J, R * y, h);
    cd rhs = block_laplacian_fd(phi, dec.b, dec.r, dec.r0, y, h);
    num += std::norm(lhs - rhs);
    den += std::norm(rhs);
  }
  if (den == 0.0) throw numeric_error("conjugation_residual: zero reference");
  return std::sqrt(num / den);
}

std::string decomposition_to_json(const MuDecomposition& dec,
                                  bool include_matrices) {
  nlohmann::json j;
  j["mu"] = std::vector<double>(dec.mu.data(), dec.mu.data() + dec.mu.size());
  j["b"] = dec.b;
  j["r"] = dec.r;
  j["r0"] = dec.r0;
  j["cluster_tol"] = dec.cluster_tol;
  j["residuals"] = {{"spectral", dec.spectral_residual},
                    {"symplectic", dec.symplectic_residual},
                    {"rotation", dec.rotation_residual},
                    {"projectors", dec.projector_residual}};
  if (include_matrices) {
    auto dump = [](const Matrix& M) {
      auto rows = nlohmann::json::array();
      for (int r = 0; r < M.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(row);
      }
      return rows;
    };
    j["rotation"] = dump(dec.rotation);
    auto projs = nlohmann::json::array();
    for (const Matrix& P : dec.projections) projs.push_back(dump(P));
    j["projections"] = projs;
  }
  return j.dump();
}

}  // namespace subspec
