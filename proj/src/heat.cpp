#include "subspec/heat.hpp"

#include <cmath>
#include <random>

#include "subspec/twisted.hpp"

namespace subspec {

namespace {

void pole_guard(cd z) {
  double k = std::round(z.real() / pi);
  if (k != 0.0 && std::abs(z - cd(k * pi, 0.0)) < 1e-8)
    throw numeric_error("S/T evaluated within 1e-8 of the pole at k*pi");
}

}  // namespace

cd s_fn(cd z) {
  pole_guard(z);
  if (std::abs(z) < 1e-4) {
    cd z2 = z * z;
    return 1.0 + z2 / 6.0 + 7.0 * z2 * z2 / 360.0 +
           31.0 * z2 * z2 * z2 / 15120.0;
  }
  return z / std::sin(z);
}

cd t_fn(cd z) {
  pole_guard(z);
  if (std::abs(z) < 1e-4) {
    cd z2 = z * z;
    return 1.0 - z2 / 3.0 - z2 * z2 / 45.0 - 2.0 * z2 * z2 * z2 / 945.0;
  }
  return z / std::tan(z);
}

cd heat_kernel(cd zeta, const BlockParams& p, const double* x) {
  p.check(false);
  if (zeta.real() <= 0.0)
    throw numeric_error("heat_kernel: Re(zeta) must be positive");
  const int d1 = p.d1();
  cd v = std::pow(4.0 * pi * zeta, -0.5 * double(d1));
  double rad2 = 0.0;
  for (int j = 0; j < p.r0; ++j) rad2 += x[j] * x[j];
  v *= std::exp(-rad2 / (4.0 * zeta));
  int off = p.r0;
  const cd I(0.0, 1.0);
  for (int n = 0; n < p.n_blocks(); ++n) {
    const int rn = p.r[n];
    double z2 = 0.0;
    for (int j = 0; j < 2 * rn; ++j) z2 += x[off + j] * x[off + j];
    cd arg = I * zeta * p.b[n];
    v *= std::pow(s_fn(arg), double(rn));
    v *= std::exp(-t_fn(arg) * z2 / (4.0 * zeta));
    off += 2 * rn;
  }
  return v;
}

Field heat_apply(const Field& f, cd zeta, const BlockParams& p) {
  p.check(false);
  if (p.r0 != 0) throw config_error("heat_apply: requires r0 = 0");
  return twisted_convolution_kernel(f, p, [&](const double* diff) {
    return heat_kernel(zeta, p, diff);
  });
}

DispersiveReport dispersive_scan(const BlockParams& p, double alpha,
                                 int n_samples, std::uint64_t seed) {
  p.check(false);
  if (alpha < 0.0) throw config_error("dispersive_scan: alpha must be >= 0");
  double bmax = 0.0;
  for (double bn : p.b) bmax = std::max(bmax, bn);
  if (bmax > 0.0 && alpha >= pi / bmax)
    throw config_error("dispersive_scan: alpha violates admissibility "
                       "(needs alpha < pi / max b_n)");
  if (n_samples < 1) throw config_error("dispersive_scan: n_samples >= 1");

  const int d1 = p.d1();
  std::mt19937_64 rng(stream_seed(seed, 0xd15u));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> uim(-alpha, alpha);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DispersiveReport rep;
  std::vector<double> origin(d1, 0.0), probe(d1);
  for (int s = 0; s < n_samples; ++s) {
    double re = u01(rng);
    if (re < 1e-3) re = 1e-3;  // stay off the boundary Re = 0
    cd zeta(re, alpha > 0.0 ? uim(rng) : 0.0);
    DispersiveSample sample;
    sample.zeta = zeta;
    sample.sup_value = std::abs(heat_kernel(zeta, p, origin.data()));
    sample.bound_value =
        sample.sup_value * std::pow(std::abs(zeta), 0.5 * double(d1));
    // the sup over x sits at the origin: all exponential factors have
    // nonnegative real part on the right half-plane; spot-check it
    for (int t = 0; t < 4; ++t) {
      for (int j = 0; j < d1; ++j) probe[j] = gauss(rng);
      if (std::abs(heat_kernel(zeta, p, probe.data())) >
          sample.sup_value * (1.0 + 1e-10))
        rep.sup_at_origin_ok = false;
    }
    rep.max_constant = std::max(rep.max_constant, sample.bound_value);
    rep.samples.push_back(sample);
  }
  return rep;
}

double fejer_F(int K, double lambda) {
  const double x = lambda - K;
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return (2.0 / pi) * (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0);
  }
  return (2.0 / pi) * (x - std::sin(x)) / (x * x * x);
}

double fejer_fourier_check(int K) {
  // F_K decays like x^{-2}, so the transform needs a long grid; the tail
  // beyond X contributes at most 4/(pi X)
  const double X = 40000.0;
  const double h = 0.05;
  const long n = long(2 * X / h) + 1;

  double max_dev = 0.0;
  for (int q = -25; q <= 25; ++q) {
    const double xi = q * 0.05;
    // integral of F_K(lambda) e^{-i lambda xi} d lambda via trapezoid with
    // a phase recurrence; substitute lambda = K + x
    cd rot(std::cos(-h * xi), std::sin(-h * xi));
    cd phase(std::cos(-(-X) * xi), std::sin(-(-X) * xi));
    cd acc = 0.0;
    for (long i = 0; i < n; ++i) {
      double x = -X + i * h;
      double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      acc += w * fejer_F(0, x) * phase;
      phase *= rot;
    }
    cd value = acc * h;
    // shift by K: hat F_K(xi) = e^{-i K xi} hat F_0(xi)
    value *= cd(std::cos(-K * xi), std::sin(-K * xi));
    double a = 1.0 - std::abs(xi);
    cd target = a > 0.0 ? cd(a * a, 0.0) : cd(0.0, 0.0);
    target *= cd(std::cos(-K * xi), std::sin(-K * xi));
    max_dev = std::max(max_dev, std::abs(value - target));
  }
  return max_dev;
}

}  // namespace subspec
