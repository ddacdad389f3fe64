#include "subspec/laguerre.hpp"

#include <cmath>
#include <sstream>

namespace subspec {

void BlockParams::check(bool strictly_positive) const {
  if (b.size() != r.size())
    throw config_error("BlockParams: b and r length mismatch");
  if (b.empty()) throw config_error("BlockParams: at least one block required");
  if (r0 < 0) throw config_error("BlockParams: r0 must be nonnegative");
  for (size_t n = 0; n < b.size(); ++n) {
    if (r[n] < 1) throw config_error("BlockParams: multiplicities must be >= 1");
    if (b[n] < 0.0 || (strictly_positive && b[n] <= 0.0))
      throw config_error("BlockParams: frequencies must be positive");
  }
}

double laguerre_poly(int k, int alpha, double x) {
  if (k < 0) throw config_error("laguerre_poly: k must be nonnegative");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int n = 2; n <= k; ++n) {
    double next = ((2 * n - 1 + alpha - x) * cur - (n - 1 + alpha) * prev) / n;
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_scaled(int k, int alpha, double x) {
  const double e = std::exp(-0.5 * x);
  if (k == 0) return e;
  double prev = e;
  double cur = (1.0 + alpha - x) * e;
  for (int n = 2; n <= k; ++n) {
    double next = ((2 * n - 1 + alpha - x) * cur - (n - 1 + alpha) * prev) / n;
    prev = cur;
    cur = next;
  }
  return cur;
}

double phi_radial(int k, double lambda, int m, double z_norm_sq) {
  if (lambda <= 0.0) throw config_error("phi: lambda must be positive");
  if (m < 1) throw config_error("phi: m must be >= 1");
  if (z_norm_sq == 0.0)
    return std::pow(lambda, m) * binomial(k + m - 1, k);
  return std::pow(lambda, m) *
         laguerre_scaled(k, m - 1, 0.5 * lambda * z_norm_sq);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= double(n - k + i) / double(i);
  return v;
}

double eigenvalue(const LatticePoint& k, const BlockParams& p) {
  if (k.k.size() != p.b.size())
    throw config_error("eigenvalue: lattice point dimension mismatch");
  double lam = 0.0;
  for (size_t n = 0; n < p.b.size(); ++n) {
    if (k.k[n] < 0) throw config_error("eigenvalue: negative lattice index");
    lam += (2.0 * k.k[n] + p.r[n]) * p.b[n];
  }
  return lam;
}

namespace {

void enumerate_rec(const BlockParams& p, double lo, double hi, size_t level,
                   double partial, LatticePoint& cur,
                   std::vector<LatticePoint>& out) {
  const size_t N = p.b.size();
  if (level == N) {
    if (partial >= lo && partial < hi) out.push_back(cur);
    return;
  }
  // minimal contribution of the remaining blocks
  double min_rest = 0.0;
  for (size_t n = level + 1; n < N; ++n) min_rest += p.r[n] * p.b[n];
  for (int kn = 0;; ++kn) {
    double contrib = (2.0 * kn + p.r[level]) * p.b[level];
    if (partial + contrib + min_rest >= hi) break;
    cur.k[level] = kn;
    enumerate_rec(p, lo, hi, level + 1, partial + contrib, cur, out);
  }
}

}  // namespace

std::vector<LatticePoint> enumerate_lattice(const BlockParams& p, double lo,
                                            double hi) {
  p.check(true);
  if (!(lo >= 0.0) || !(lo < hi) || !std::isfinite(hi))
    throw config_error("enumerate_lattice: need finite 0 <= lo < hi");
  std::vector<LatticePoint> out;
  LatticePoint cur;
  cur.k.assign(p.b.size(), 0);
  enumerate_rec(p, lo, hi, 0, 0.0, cur, out);
  return out;
}

cd twist_factor(const BlockParams& p, const double* x, const double* y) {
  double phase = 0.0;
  int off = p.r0;
  for (size_t n = 0; n < p.b.size(); ++n) {
    const int rn = p.r[n];
    // omega_std(u, v) = <J_std u, v> with J_std = [[0,-I],[I,0]]:
    // sum_j (u_j v_{j+r} - u_{j+r} v_j)
    double omega = 0.0;
    for (int j = 0; j < rn; ++j)
      omega += x[off + j] * y[off + rn + j] - x[off + rn + j] * y[off + j];
    phase += 0.5 * p.b[n] * omega;
    off += 2 * rn;
  }
  return {std::cos(phase), std::sin(phase)};
}

cd TwistedKernel::eval(const double* x, const double* y) const {
  double amp = c;
  int off = 0;
  for (size_t n = 0; n < params.b.size(); ++n) {
    const int rn = params.r[n];
    double d2 = 0.0;
    for (int j = 0; j < 2 * rn; ++j) {
      double d = x[off + j] - y[off + j];
      d2 += d * d;
    }
    amp *= phi_radial(k.k[n], params.b[n], rn, d2);
    off += 2 * rn;
  }
  return amp * twist_factor(params, x, y);
}

double TwistedKernel::diagonal() const {
  double v = c;
  for (size_t n = 0; n < params.b.size(); ++n)
    v *= std::pow(params.b[n], params.r[n]) *
         binomial(k.k[n] + params.r[n] - 1, k.k[n]);
  return v;
}

TwistedKernel projection_kernel(const LatticePoint& k, const BlockParams& p,
                                double c) {
  p.check(true);
  if (p.r0 != 0)
    throw config_error("projection_kernel: requires r0 = 0 (the Euclidean "
                       "factor is handled by Fourier multipliers)");
  if (k.k.size() != p.b.size())
    throw config_error("projection_kernel: lattice point dimension mismatch");
  return TwistedKernel{c, p, k};
}

double projection_normalization(const BlockParams& p) {
  return std::pow(2.0 * pi, -double(p.r_sum()));
}

}  // namespace subspec
