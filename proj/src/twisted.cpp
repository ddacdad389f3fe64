#include "subspec/twisted.hpp"

#include <cmath>
#include <iostream>

#include "subspec/kernels.hpp"

namespace subspec {

DiffProfile2D diff_profile_from_field(const Field& g) {
  if (g.grid.dim != 2) throw config_error("diff profile: 2D grids only");
  const int n = g.grid.n;
  DiffProfile2D D;
  D.n = n;
  D.data.assign(std::size_t(2 * n - 1) * (2 * n - 1), cd(0.0, 0.0));
  // difference (i-j)h is the grid point with index i-j+n/2 when in range,
  // zero (decay) otherwise; the grid is centered so origin = -(n/2)h
  const int shift = n / 2;
  for (int di = -(n - 1); di <= n - 1; ++di)
    for (int dj = -(n - 1); dj <= n - 1; ++dj) {
      int gi = di + shift, gj = dj + shift;
      cd v = 0.0;
      if (gi >= 0 && gi < n && gj >= 0 && gj < n)
        v = g.values[std::size_t(gi) * n + gj];
      D.data[std::size_t(di + n - 1) * (2 * n - 1) + std::size_t(n - 1 - dj)] = v;
    }
  return D;
}

DiffProfile2D diff_profile_from_radial(
    const Grid& g, const std::function<cd(double r2)>& radial) {
  if (g.dim != 2) throw config_error("diff profile: 2D grids only");
  const int n = g.n;
  DiffProfile2D D;
  D.n = n;
  D.data.assign(std::size_t(2 * n - 1) * (2 * n - 1), cd(0.0, 0.0));
  for (int di = -(n - 1); di <= n - 1; ++di)
    for (int dj = -(n - 1); dj <= n - 1; ++dj) {
      double r2 = (di * double(di) + dj * double(dj)) * g.h * g.h;
      D.data[std::size_t(di + n - 1) * (2 * n - 1) + std::size_t(n - 1 - dj)] =
          radial(r2);
    }
  return D;
}

Field twisted_apply_2d(const Field& f, double b_signed,
                       const DiffProfile2D& D) {
  const Grid& g = f.grid;
  if (g.dim != 2 || D.n != g.n)
    throw config_error("twisted_apply_2d: grid/profile mismatch");
  const int n = g.n;
  const auto& ops = kernels::ops();

  // E(y,z) = exp(i/2 b (y1 z2 - y2 z1)) = P1[y1,z2] * P2[y2,z1]
  std::vector<cd> P1(std::size_t(n) * n), P2(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      double ya = g.coord(a), zc = g.coord(c);
      double t = 0.5 * b_signed * ya * zc;
      P1[std::size_t(a) * n + c] = cd(std::cos(t), std::sin(t));
      P2[std::size_t(a) * n + c] = cd(std::cos(t), -std::sin(t));
    }

  Field out(g);
  const double w = g.weight();
  std::vector<cd> inner(n);
  for (int i1 = 0; i1 < n; ++i1) {
    const cd* P1row = &P1[std::size_t(i1) * n];
    for (int i2 = 0; i2 < n; ++i2) out.values[std::size_t(i1) * n + i2] = 0.0;
    for (int j1 = 0; j1 < n; ++j1) {
      const cd* frow = &f.values[std::size_t(j1) * n];
      const cd* Drow = D.reversed_row(i1 - j1);
      for (int i2 = 0; i2 < n; ++i2)
        inner[i2] = ops.ztripledot(Drow + (n - 1 - i2), P1row, frow, n);
      const cd* P2col = P2.data() + j1;  // P2[i2][j1] with stride n
      for (int i2 = 0; i2 < n; ++i2)
        out.values[std::size_t(i1) * n + i2] += P2col[std::size_t(i2) * n] * inner[i2];
    }
  }
  for (cd& v : out.values) v *= w;
  return out;
}

bool boundary_decay_ok(const Field& f, double threshold) {
  return f.boundary_max_abs() <= threshold;
}

namespace {

// direct per-pair evaluation, any block layout; O(n^{2 dim})
Field twisted_apply_direct(const Field& f, const BlockParams& p,
                           const std::function<cd(const double*, const double*)>&
                               kernel_at) {
  const Grid& g = f.grid;
  Field out(g);
  const std::size_t total = g.size();
  std::vector<int> iy(g.dim), iz(g.dim);
  std::vector<double> y(g.dim), z(g.dim);
  const double w = g.weight();
  for (std::size_t fy = 0; fy < total; ++fy) {
    unflatten(g, fy, iy.data());
    for (int d = 0; d < g.dim; ++d) y[d] = g.coord(iy[d]);
    cd acc = 0.0;
    for (std::size_t fz = 0; fz < total; ++fz) {
      if (f.values[fz] == cd(0.0, 0.0)) continue;
      unflatten(g, fz, iz.data());
      for (int d = 0; d < g.dim; ++d) z[d] = g.coord(iz[d]);
      acc += f.values[fz] * kernel_at(y.data(), z.data());
    }
    out.values[fy] = acc * w;
  }
  return out;
}

}  // namespace

Field twisted_convolution(const Field& f, const Field& g,
                          const BlockParams& p) {
  p.check(true);
  if (p.r0 != 0) throw config_error("twisted_convolution: requires r0 = 0");
  if (!f.grid.compatible(g.grid))
    throw config_error("twisted_convolution: grids mismatch");
  if (f.grid.dim != p.d1())
    throw config_error("twisted_convolution: grid dimension != d1");
  if (!boundary_decay_ok(f) || !boundary_decay_ok(g))
    std::cerr << "[subspec] warning: twisted_convolution inputs do not decay "
                 "below 1e-10 at the grid boundary\n";

  if (f.grid.dim == 2 && p.n_blocks() == 1 && p.r[0] == 1)
    return twisted_apply_2d(f, p.b[0], diff_profile_from_field(g));

  // general slow path: evaluate g at difference lattice points
  const Grid& gr = f.grid;
  const int n = gr.n, shift = n / 2;
  return twisted_apply_direct(
      f, p, [&](const double* y, const double* z) -> cd {
        cd gv = 0.0;
        std::size_t flat = 0;
        bool ok = true;
        for (int d = 0; d < gr.dim; ++d) {
          int gi = int(std::lround((y[d] - z[d]) / gr.h)) + shift;
          if (gi < 0 || gi >= n) { ok = false; break; }
          flat = flat * n + std::size_t(gi);
        }
        if (ok) gv = g.values[flat];
        return gv * twist_factor(p, y, z);
      });
}

Field twisted_convolution_kernel(
    const Field& f, const BlockParams& p,
    const std::function<cd(const double* diff)>& kernel) {
  p.check(true);
  if (p.r0 != 0) throw config_error("twisted_convolution: requires r0 = 0");
  if (f.grid.dim != p.d1())
    throw config_error("twisted_convolution: grid dimension != d1");

  if (f.grid.dim == 2 && p.n_blocks() == 1 && p.r[0] == 1) {
    const Grid& g = f.grid;
    DiffProfile2D D;
    D.n = g.n;
    D.data.assign(std::size_t(2 * g.n - 1) * (2 * g.n - 1), cd(0.0, 0.0));
    double diff[2];
    for (int di = -(g.n - 1); di <= g.n - 1; ++di)
      for (int dj = -(g.n - 1); dj <= g.n - 1; ++dj) {
        diff[0] = di * g.h;
        diff[1] = dj * g.h;
        D.data[std::size_t(di + g.n - 1) * (2 * g.n - 1) +
               std::size_t(g.n - 1 - dj)] = kernel(diff);
      }
    return twisted_apply_2d(f, p.b[0], D);
  }

  std::vector<double> diff(f.grid.dim);
  return twisted_apply_direct(
      f, p, [&](const double* y, const double* z) -> cd {
        for (int d = 0; d < f.grid.dim; ++d) diff[d] = y[d] - z[d];
        return kernel(diff.data()) * twist_factor(p, y, z);
      });
}

Field apply_projection(const Field& f, const TwistedKernel& K) {
  const BlockParams& p = K.params;
  if (p.n_blocks() == 1 && p.r[0] == 1 && f.grid.dim == 2) {
    const double b = p.b[0];
    const int kk = K.k.k[0];
    const double c = K.c;
    return twisted_convolution_kernel(f, p, [&](const double* diff) -> cd {
      double r2 = diff[0] * diff[0] + diff[1] * diff[1];
      return c * phi_radial(kk, b, 1, r2);
    });
  }
  return twisted_convolution_kernel(f, p, [&](const double* diff) -> cd {
    double amp = K.c;
    int off = 0;
    for (int n = 0; n < p.n_blocks(); ++n) {
      double d2 = 0.0;
      for (int j = 0; j < 2 * p.r[n]; ++j) d2 += diff[off + j] * diff[off + j];
      amp *= phi_radial(K.k.k[n], p.b[n], p.r[n], d2);
      off += 2 * p.r[n];
    }
    return cd(amp, 0.0);
  });
}

Field apply_twisted_laplacian(const Field& f, const BlockParams& p) {
  p.check(false);
  if (p.r0 != 0) throw config_error("apply_twisted_laplacian: requires r0 = 0");
  const Grid& g = f.grid;
  if (g.dim != p.d1())
    throw config_error("apply_twisted_laplacian: grid dimension != d1");
  if (g.h > 0.2)
    throw config_error("apply_twisted_laplacian: grid too coarse (h > 0.2)");

  // per-axis block index and standard-symplectic partner axis
  std::vector<double> axis_b(g.dim);
  std::vector<int> partner(g.dim);
  std::vector<double> partner_sign(g.dim);
  {
    int off = 0;
    for (int n = 0; n < p.n_blocks(); ++n) {
      const int rn = p.r[n];
      for (int j = 0; j < rn; ++j) {
        axis_b[off + j] = p.b[n];
        axis_b[off + rn + j] = p.b[n];
        // (J_std z)_j = -z_{j+r}; (J_std z)_{j+r} = z_j
        partner[off + j] = off + rn + j;
        partner_sign[off + j] = -1.0;
        partner[off + rn + j] = off + j;
        partner_sign[off + rn + j] = 1.0;
      }
      off += 2 * rn;
    }
  }

  Field out(g);
  const int n = g.n;
  std::vector<int> idx(g.dim);
  std::vector<double> x(g.dim);
  const double h2 = g.h * g.h;

  std::vector<std::size_t> stride(g.dim);
  {
    std::size_t s = 1;
    for (int d = g.dim - 1; d >= 0; --d) {
      stride[d] = s;
      s *= std::size_t(n);
    }
  }

  for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
    unflatten(g, flat, idx.data());
    for (int d = 0; d < g.dim; ++d) x[d] = g.coord(idx[d]);
    const cd f0 = f.values[flat];
    cd lap = 0.0;
    std::vector<cd> grad(g.dim);
    for (int d = 0; d < g.dim; ++d) {
      cd fp = idx[d] + 1 < n ? f.values[flat + stride[d]] : cd(0.0);
      cd fm = idx[d] - 1 >= 0 ? f.values[flat - stride[d]] : cd(0.0);
      lap += (fp - 2.0 * f0 + fm) / h2;
      grad[d] = (fp - fm) / (2.0 * g.h);
    }
    cd v = -lap;
    for (int d = 0; d < g.dim; ++d) {
      v += 0.25 * axis_b[d] * axis_b[d] * x[d] * x[d] * f0;
      // -i b omega(z, grad) accumulated per axis:
      // omega(z, grad) = sum_d (J_std z)_d grad_d
      double Jz_d = partner_sign[d] * x[partner[d]];
      v += cd(0.0, -1.0) * axis_b[d] * Jz_d * grad[d];
    }
    out.values[flat] = v;
  }
  return out;
}

}  // namespace subspec
