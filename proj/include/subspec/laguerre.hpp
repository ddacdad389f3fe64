#pragma once

#include <vector>

#include "subspec/common.hpp"

namespace subspec {

// Anisotropic block parameters (b, r) with radical dimension r0 and
// d1 = r0 + 2*sum(r_n). Spectral operations (eigenvalue lattice,
// projection kernels, twisted convolution) require all b_n > 0; the heat
// layer also accepts b_n = 0, where a block degenerates to a Euclidean
// Laplacian.
struct BlockParams {
  std::vector<double> b;
  std::vector<int> r;
  int r0 = 0;

  int n_blocks() const { return int(b.size()); }
  int r_sum() const {
    int s = 0;
    for (int rn : r) s += rn;
    return s;
  }
  int d1() const { return r0 + 2 * r_sum(); }

  void check(bool strictly_positive) const;
};

struct LatticePoint {
  std::vector<int> k;
  bool operator==(const LatticePoint& o) const { return k == o.k; }
};

// L_k^alpha(x) by the three-term recurrence.
double laguerre_poly(int k, int alpha, double x);

// L_k^alpha(x) * exp(-x/2), evaluated by running the recurrence on the
// scaled values; stable for k up to ~1e4.
double laguerre_scaled(int k, int alpha, double x);

// lambda-rescaled Laguerre function
// phi_k^{(lambda,m)}(z) = lambda^m L_k^{m-1}(lambda|z|^2/2) exp(-lambda|z|^2/4)
double phi_radial(int k, double lambda, int m, double z_norm_sq);

// eigenvalue sum_n (2 k_n + r_n) b_n
double eigenvalue(const LatticePoint& k, const BlockParams& p);

// all k with eigenvalue in [lo, hi), lexicographic order
std::vector<LatticePoint> enumerate_lattice(const BlockParams& p, double lo,
                                            double hi);

// Kernel of the k-th spectral projection (times a caller normalization c):
// K(x,y) = c * prod_n phi_{k_n}^{(b_n,r_n)}(x^(n)-y^(n)) * E^{b,r}(x,y).
// Requires r0 = 0; x, y are points of R^{d1} in block layout.
struct TwistedKernel {
  double c = 1.0;
  BlockParams params;
  LatticePoint k;

  cd eval(const double* x, const double* y) const;
  // value on the diagonal, independent of x
  double diagonal() const;
};

TwistedKernel projection_kernel(const LatticePoint& k, const BlockParams& p,
                                double c);

// oscillatory twist E^{b,r}(x,y) = prod_n exp(i/2 b_n omega_std(x^(n),y^(n)))
cd twist_factor(const BlockParams& p, const double* x, const double* y);

// projection normalization making P_k = c * (. x phi_k) idempotent
double projection_normalization(const BlockParams& p);

double binomial(int n, int k);

}  // namespace subspec
