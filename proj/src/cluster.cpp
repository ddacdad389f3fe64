#include "subspec/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "subspec/hermite.hpp"
#include "subspec/kernels.hpp"
#include "subspec/twisted.hpp"

namespace subspec {

std::vector<LatticePoint> cluster_members(const ClusterSpec& cs) {
  if (cs.K < 0) throw config_error("cluster window must be nonnegative");
  return enumerate_lattice(cs.p, double(cs.K), double(cs.K) + 1.0);
}

namespace {

double diagonal_sum(const BlockParams& p,
                    const std::vector<LatticePoint>& members) {
  double s = 0.0;
  for (const LatticePoint& k : members) {
    double term = 1.0;
    for (int n = 0; n < p.n_blocks(); ++n)
      term *= std::pow(p.b[n], p.r[n]) * binomial(k.k[n] + p.r[n] - 1, k.k[n]);
    s += term;
  }
  return s;
}

}  // namespace

double norm_1to2_exact(const ClusterSpec& cs) {
  cs.p.check(true);
  if (cs.p.r0 != 0) throw config_error("norm_1to2_exact: requires r0 = 0");
  auto members = cluster_members(cs);
  if (members.empty()) return 0.0;
  return std::sqrt(cs.normalization() * diagonal_sum(cs.p, members));
}

ScalingCheck scaling_identity_check(const ClusterSpec& cs, double mu_norm) {
  if (mu_norm <= 0.0) throw config_error("scaling check: |mu| must be positive");
  cs.p.check(true);
  if (cs.p.r0 != 0) throw config_error("scaling check: requires r0 = 0");

  // same member set by construction: lambda_k^{|mu| b} = |mu| lambda_k^{b},
  // so the window [K|mu|, (K+1)|mu|) selects exactly the unit-cluster k's
  auto members = cluster_members(cs);
  ScalingCheck out;
  out.expected = std::pow(mu_norm, 0.25 * cs.p.d1());
  if (members.empty()) {
    out.ratio = out.expected;  // 0/0 window; report the identity as exact
    out.residual = 0.0;
    return out;
  }
  BlockParams scaled = cs.p;
  for (double& bn : scaled.b) bn *= mu_norm;
  double unit = std::sqrt(cs.normalization() * diagonal_sum(cs.p, members));
  double resc = std::sqrt(cs.normalization() * diagonal_sum(scaled, members));
  out.ratio = resc / unit;
  out.residual = std::abs(out.ratio - out.expected) / out.expected;
  return out;
}

ExponentFit fit_exponent(const std::vector<std::pair<int, double>>& series,
                         int K_min) {
  ExponentFit fit;
  fit.K_min = K_min;
  for (const auto& [K, norm] : series) {
    if (K < K_min || norm <= 0.0) continue;
    fit.xs.push_back(std::log(double(K) + 1.0));
    fit.ys.push_back(std::log(norm));
    fit.K_max = std::max(fit.K_max, K);
  }
  const std::size_t n = fit.xs.size();
  if (n < 8)
    throw config_error("fit_exponent: need at least 8 nonempty samples, got " +
                       std::to_string(n));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += fit.xs[i];
    sy += fit.ys[i];
    sxx += fit.xs[i] * fit.xs[i];
    sxy += fit.xs[i] * fit.ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw numeric_error("fit_exponent: degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = fit.ys[i] - (fit.slope * fit.xs[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

ClusterGridOp::ClusterGridOp(const ClusterSpec& cs, const Grid& grid,
                             bool use_basis)
    : grid_(grid), use_basis_(use_basis) {
  cs.p.check(true);
  if (cs.p.r0 != 0 || cs.p.n_blocks() != 1 || cs.p.r[0] != 1 || grid.dim != 2)
    throw config_error("ClusterGridOp: single 2D block only");
  b_ = cs.p.b[0];
  auto members = cluster_members(cs);
  const double c = cs.normalization();
  const int n = grid.n;

  if (!use_basis_) {
    profile_.assign(std::size_t(2 * n - 1) * (2 * n - 1), cd(0.0, 0.0));
    for (int di = -(n - 1); di <= n - 1; ++di)
      for (int dj = -(n - 1); dj <= n - 1; ++dj) {
        double r2 = (di * double(di) + dj * double(dj)) * grid.h * grid.h;
        double amp = 0.0;
        for (const LatticePoint& k : members)
          amp += phi_radial(k.k[0], b_, 1, r2);
        profile_[std::size_t(di + n - 1) * (2 * n - 1) +
                 std::size_t(n - 1 - dj)] = cd(c * amp, 0.0);
      }
    return;
  }

  // basis backend: special Hermite columns Phi_{alpha,k} for every cluster
  // member k; alpha runs until the classically allowed annulus
  // sqrt(2/b) [ |sqrt(alpha)-sqrt(k)|, sqrt(alpha)+sqrt(k) ] leaves the grid
  const double extent = -grid.origin;
  for (const LatticePoint& k : members) {
    const int kk = k.k[0];
    double root = extent * std::sqrt(0.5 * b_) - std::sqrt(double(kk));
    int alpha_max = root > 0.0 ? int(std::ceil(root * root)) : 0;
    alpha_max += 24;
    for (int a = 0; a <= alpha_max; ++a) {
      std::vector<cd> col(grid.size());
      std::size_t idx = 0;
      for (int i1 = 0; i1 < grid.n; ++i1)
        for (int i2 = 0; i2 < grid.n; ++i2)
          col[idx++] = special_hermite_m1(a, kk, b_, grid.coord(i1),
                                          grid.coord(i2));
      columns_.push_back(std::move(col));
    }
  }
}

Field ClusterGridOp::apply(const Field& f) const {
  if (!f.grid.compatible(grid_)) throw config_error("ClusterGridOp: grid mismatch");
  if (!use_basis_) {
    DiffProfile2D D;
    D.n = grid_.n;
    D.data = profile_;
    return twisted_apply_2d(f, b_, D);
  }
  const auto& ops = kernels::ops();
  const double w = grid_.weight();
  Field out(grid_);
  for (const auto& col : columns_) {
    cd coeff = ops.zdotc(col.data(), f.values.data(), col.size()) * w;
    ops.zaxpy(coeff, col.data(), out.values.data(), col.size());
  }
  return out;
}

namespace {

double weighted_pnorm(const std::vector<cd>& v, double p, double w) {
  if (p == 2.0)
    return std::sqrt(kernels::ops().znorm2sq(v.data(), v.size()) * w);
  double s = 0.0;
  for (const cd& x : v) s += std::pow(std::abs(x), p);
  return std::pow(s * w, 1.0 / p);
}

}  // namespace

PowerMethodResult norm_p_to_2_lower(const ClusterSpec& cs, double p,
                                    const Grid& grid,
                                    const PowerMethodOptions& opts) {
  if (p < 1.0 || p > 2.0)
    throw config_error("norm_p_to_2_lower: p must lie in [1, 2]");
  auto members = cluster_members(cs);
  PowerMethodResult res;
  if (members.empty()) return res;  // empty cluster has norm 0

  bool use_basis = opts.backend == PowerMethodOptions::Backend::basis ||
                   (opts.backend == PowerMethodOptions::Backend::automatic &&
                    grid.n > 80);
  ClusterGridOp A(cs, grid, use_basis);

  const double w = grid.weight();
  const std::size_t N = grid.size();

  struct StartResult {
    double best = 0.0;
    bool converged = true;
    int iterations = 0;
  };

  auto run_from = [&](Field x) {
    StartResult sr;
    double pn = weighted_pnorm(x.values, p, w);
    if (pn == 0.0) return sr;
    for (cd& v : x.values) v /= pn;
    int stalled = 0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      sr.iterations = it + 1;
      Field g = A.apply(x);
      double val = std::sqrt(kernels::ops().znorm2sq(g.values.data(), N) * w);
      if (val <= sr.best * (1.0 + opts.rel_tol)) {
        sr.best = std::max(sr.best, val);
        if (++stalled >= 3) return sr;
      } else {
        stalled = 0;
        sr.best = val;
      }
      if (val == 0.0) return sr;
      if (p == 2.0) {
        x = g;
        for (cd& v : x.values) v /= val;
        continue;
      }
      // dualize: u = g/||g||_2, v = A u, x = |v|^{p'-1} phase(v)
      for (cd& v : g.values) v /= val;
      Field v2 = A.apply(g);
      if (p == 1.0) {
        std::size_t arg = 0;
        double mx = -1.0;
        for (std::size_t i = 0; i < N; ++i) {
          double a = std::abs(v2.values[i]);
          if (a > mx * (1.0 + 1e-14)) {
            mx = a;
            arg = i;
          }
        }
        std::fill(x.values.begin(), x.values.end(), cd(0.0, 0.0));
        cd ph = mx > 0.0 ? v2.values[arg] / mx : cd(1.0, 0.0);
        x.values[arg] = std::conj(ph) / w;  // unit l1 mass, aligned phase
      } else {
        const double q = 1.0 / (p - 1.0);  // p' - 1
        for (std::size_t i = 0; i < N; ++i) {
          double a = std::abs(v2.values[i]);
          cd ph = a > 0.0 ? v2.values[i] / a : cd(0.0, 0.0);
          x.values[i] = std::pow(a, q) * ph;
        }
        double pn2 = weighted_pnorm(x.values, p, w);
        if (pn2 == 0.0) return sr;
        for (cd& v : x.values) v /= pn2;
      }
    }
    sr.converged = false;
    return sr;
  };

  auto merge = [&res](const StartResult& sr) {
    res.value = std::max(res.value, sr.best);
    res.converged = res.converged && sr.converged;
    res.iterations = std::max(res.iterations, sr.iterations);
  };

  // deterministic bump start at the origin node
  {
    Field bump(grid);
    int c = grid.n / 2;
    bump.values[std::size_t(c) * grid.n + c] = cd(1.0, 0.0);
    merge(run_from(std::move(bump)));
  }
  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(stream_seed(opts.seed, std::uint64_t(cs.K), r));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field x(grid);
    for (cd& v : x.values) v = cd(gauss(rng), gauss(rng));
    merge(run_from(std::move(x)));
  }
  return res;
}

}  // namespace subspec
