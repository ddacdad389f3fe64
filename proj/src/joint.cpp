#include "subspec/joint.hpp"

#include <cmath>

#include "subspec/kernels.hpp"
#include "subspec/laguerre.hpp"
#include "subspec/twisted.hpp"

namespace subspec {

JointField JointField::make(int nx, double Lx, int nu, double Lu) {
  if (nx < 2 || nu < 2 || Lx <= 0.0 || Lu <= 0.0)
    throw config_error("JointField: bad grid parameters");
  JointField f;
  f.nx = nx;
  f.hx = 2.0 * Lx / nx;
  f.x0 = -Lx;
  f.nu = nu;
  f.hu = 2.0 * Lu / nu;
  f.u0 = -Lu;
  f.values.assign(std::size_t(nx) * nx * nu, cd(0.0, 0.0));
  return f;
}

double JointField::norm2() const {
  return std::sqrt(kernels::ops().znorm2sq(values.data(), values.size()) *
                   cell());
}

double JointField::norm1() const {
  double s = 0.0;
  for (const cd& v : values) s += std::abs(v);
  return s * cell();
}

JointField sample_joint(
    int nx, double Lx, int nu, double Lu,
    const std::function<cd(double, double, double)>& fn) {
  JointField f = JointField::make(nx, Lx, nu, Lu);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < nx; ++i1)
    for (int i2 = 0; i2 < nx; ++i2)
      for (int iu = 0; iu < nu; ++iu)
        f.values[idx++] = fn(f.xcoord(i1), f.xcoord(i2), f.ucoord(iu));
  return f;
}

namespace {

void require_h1(const GroupSpec& spec) {
  bool ok = spec.d1 == 2 && spec.d2 == 1 && spec.structure.size() == 1;
  if (ok) {
    Matrix J2(2, 2);
    J2 << 0, -1, 1, 0;
    ok = (spec.structure[0] - J2).cwiseAbs().maxCoeff() <= 1e-12;
  }
  if (!ok)
    throw config_error("apply_joint_multiplier: only the heisenberg:1 "
                       "preset is supported");
}

// DFT along u: forward rows e^{-i mu_j u_i} * hu, inverse rows
// e^{+i mu_j u_i} / (2 Lu); mu_j = (pi/Lu) (j - nu/2).
struct CenterDft {
  int nu;
  std::vector<double> mu;
  std::vector<cd> fwd;
  std::vector<cd> inv;

  explicit CenterDft(const JointField& f) : nu(f.nu) {
    const double Lu = -f.u0;
    mu.resize(nu);
    fwd.resize(std::size_t(nu) * nu);
    inv.resize(std::size_t(nu) * nu);
    for (int j = 0; j < nu; ++j) {
      mu[j] = (pi / Lu) * double(j - nu / 2);
      for (int i = 0; i < nu; ++i) {
        double ph = mu[j] * f.ucoord(i);
        fwd[std::size_t(j) * nu + i] = cd(std::cos(ph), -std::sin(ph)) * f.hu;
        inv[std::size_t(j) * nu + i] =
            cd(std::cos(ph), std::sin(ph)) / (2.0 * Lu);
      }
    }
  }
};

// combined kernel profile (1/2pi) |mu| sum_k w_k L_k(x) e^{-x/2} evaluated
// at the grid difference lattice, x = |mu| |d|^2 / 2
DiffProfile2D multiplier_profile(const Grid& g, double abs_mu,
                                 const std::vector<double>& weights) {
  DiffProfile2D D;
  const int n = g.n;
  D.n = n;
  D.data.assign(std::size_t(2 * n - 1) * (2 * n - 1), cd(0.0, 0.0));
  const double c = abs_mu / (2.0 * pi);
  const int k_max = int(weights.size()) - 1;
  for (int di = -(n - 1); di <= n - 1; ++di)
    for (int dj = -(n - 1); dj <= n - 1; ++dj) {
      double x = 0.5 * abs_mu * (di * double(di) + dj * double(dj)) * g.h * g.h;
      double prev = std::exp(-0.5 * x);
      double acc = weights[0] * prev;
      if (k_max >= 1) {
        double cur = (1.0 - x) * prev;
        acc += weights[1] * cur;
        for (int k = 2; k <= k_max; ++k) {
          double next = ((2 * k - 1 - x) * cur - (k - 1) * prev) / k;
          prev = cur;
          cur = next;
          acc += weights[std::size_t(k)] * cur;
        }
      }
      D.data[std::size_t(di + n - 1) * (2 * n - 1) + std::size_t(n - 1 - dj)] =
          cd(c * acc, 0.0);
    }
  return D;
}

}  // namespace

JointReport apply_joint_multiplier(const GroupSpec& spec, const JointField& f,
                                   const MultiplierPair& mp,
                                   const JointOptions& opts) {
  require_h1(spec);
  const int nx = f.nx, nu = f.nu;
  const std::size_t npts = std::size_t(nx) * nx;
  const double Lx = -f.x0, Lu = -f.u0;
  const Grid xgrid = Grid::centered(2, nx, Lx);
  CenterDft dft(f);
  const auto& ops = kernels::ops();

  JointReport rep;

  // partial DFT along the center
  std::vector<Field> slices(nu, Field(xgrid));
  for (std::size_t p = 0; p < npts; ++p) {
    const cd* fu = &f.values[p * nu];
    for (int j = 0; j < nu; ++j)
      slices[j].values[p] = ops.zdotu(&dft.fwd[std::size_t(j) * nu], fu, nu);
  }

  std::vector<Field> out_slices(nu, Field(xgrid));
  double mass_total = 0.0, mass_captured = 0.0;
  const double w2 = xgrid.weight();

  for (int j = 0; j < nu; ++j) {
    const double mu = dft.mu[j];
    const Field& fj = slices[j];
    const double fj_mass = ops.znorm2sq(fj.values.data(), npts) * w2;
    mass_total += fj_mass;

    if (mu == 0.0) {
      mass_captured += fj_mass;  // the Laplacian fiber is not truncated
      const double chv = mp.chi(0.0);
      if (chv == 0.0 || fj_mass == 0.0) continue;
      // 2D Fourier multiplier F(|xi|^2) chi(0)
      std::vector<cd> xf(std::size_t(nx) * nx), xb(std::size_t(nx) * nx);
      const double dxi = pi / Lx;
      for (int a = 0; a < nx; ++a) {
        double xi = dxi * double(a - nx / 2);
        for (int i = 0; i < nx; ++i) {
          double ph = xi * (f.x0 + i * f.hx);
          xf[std::size_t(a) * nx + i] = cd(std::cos(ph), -std::sin(ph)) * f.hx;
          xb[std::size_t(a) * nx + i] =
              cd(std::cos(ph), std::sin(ph)) / (2.0 * Lx);
        }
      }
      std::vector<cd> t1(npts), hat(npts);
      for (int i1 = 0; i1 < nx; ++i1)
        for (int a2 = 0; a2 < nx; ++a2)
          t1[std::size_t(i1) * nx + a2] = ops.zdotu(
              &xf[std::size_t(a2) * nx], &fj.values[std::size_t(i1) * nx], nx);
      for (int a1 = 0; a1 < nx; ++a1)
        for (int a2 = 0; a2 < nx; ++a2) {
          cd acc = 0.0;
          for (int i1 = 0; i1 < nx; ++i1)
            acc += xf[std::size_t(a1) * nx + i1] * t1[std::size_t(i1) * nx + a2];
          hat[std::size_t(a1) * nx + a2] = acc;
        }
      for (int a1 = 0; a1 < nx; ++a1)
        for (int a2 = 0; a2 < nx; ++a2) {
          double xi1 = dxi * double(a1 - nx / 2);
          double xi2 = dxi * double(a2 - nx / 2);
          double m = mp.F(xi1 * xi1 + xi2 * xi2) * chv;
          cd& h = hat[std::size_t(a1) * nx + a2];
          rep.spectral_l2sq +=
              m * m * std::norm(h) * dxi * dxi / (4.0 * pi * pi) / (2.0 * Lu);
          h *= m;
        }
      for (int a1 = 0; a1 < nx; ++a1)
        for (int i2 = 0; i2 < nx; ++i2) {
          cd acc = 0.0;
          for (int a2 = 0; a2 < nx; ++a2)
            acc += xb[std::size_t(a2) * nx + i2] * hat[std::size_t(a1) * nx + a2];
          t1[std::size_t(a1) * nx + i2] = acc;
        }
      for (int i1 = 0; i1 < nx; ++i1)
        for (int i2 = 0; i2 < nx; ++i2) {
          cd acc = 0.0;
          for (int a1 = 0; a1 < nx; ++a1)
            acc += xb[std::size_t(a1) * nx + i1] * t1[std::size_t(a1) * nx + i2];
          out_slices[std::size_t(j)].values[std::size_t(i1) * nx + i2] = acc;
        }
      continue;
    }

    const double abs_mu = std::abs(mu);
    const double chv = mp.chi(std::ldexp(abs_mu, mp.ell));
    int k_max = opts.k_cap;
    if (mp.F.hi / abs_mu < 1e9) {
      int need = int(std::ceil(0.5 * (mp.F.hi / abs_mu - 1.0))) + 2;
      k_max = std::min(k_max, std::max(need, 0));
    }

    if (opts.compute_capture && fj_mass > 0.0) {
      std::vector<double> ones(std::size_t(k_max) + 1, 1.0);
      Field cap =
          twisted_apply_2d(fj, mu, multiplier_profile(xgrid, abs_mu, ones));
      double captured =
          ops.zdotc(fj.values.data(), cap.values.data(), npts).real() * w2;
      mass_captured += std::max(0.0, std::min(captured, fj_mass));
    }

    if (chv != 0.0 && fj_mass > 0.0) {
      std::vector<double> wout(std::size_t(k_max) + 1),
          wspec(std::size_t(k_max) + 1);
      for (int k = 0; k <= k_max; ++k) {
        double Fv = mp.F((2.0 * k + 1.0) * abs_mu);
        wout[std::size_t(k)] = Fv * chv;
        wspec[std::size_t(k)] = Fv * Fv * chv * chv;
      }
      Field spec_f =
          twisted_apply_2d(fj, mu, multiplier_profile(xgrid, abs_mu, wspec));
      rep.spectral_l2sq +=
          std::max(0.0, ops.zdotc(fj.values.data(), spec_f.values.data(), npts)
                            .real() *
                       w2) /
          (2.0 * Lu);
      out_slices[std::size_t(j)] =
          twisted_apply_2d(fj, mu, multiplier_profile(xgrid, abs_mu, wout));
    }
  }

  if (opts.compute_capture && mass_total > 0.0) {
    rep.captured_fraction = mass_captured / mass_total;
    rep.capture_flag = rep.captured_fraction < 0.999;
  }

  // Parseval over center frequencies gives the output norm directly
  double s = 0.0;
  for (int j = 0; j < nu; ++j)
    s += ops.znorm2sq(out_slices[std::size_t(j)].values.data(), npts);
  rep.output_l2 = std::sqrt(s * w2 / (2.0 * Lu));

  if (opts.want_output) {
    rep.output = JointField::make(nx, Lx, nu, Lu);
    std::vector<cd> col(nu);
    for (std::size_t p = 0; p < npts; ++p) {
      for (int j = 0; j < nu; ++j)
        col[std::size_t(j)] = out_slices[std::size_t(j)].values[p];
      cd* ou = &rep.output.values[p * nu];
      for (int i = 0; i < nu; ++i) {
        cd acc = 0.0;
        for (int j = 0; j < nu; ++j)
          acc += dft.inv[std::size_t(j) * nu + i] * col[std::size_t(j)];
        ou[i] = acc;
      }
    }
  }
  return rep;
}

}  // namespace subspec
