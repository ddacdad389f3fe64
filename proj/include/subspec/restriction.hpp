#pragma once

#include "subspec/group.hpp"
#include "subspec/symplectic.hpp"

namespace subspec {

// Compactly supported function stored as uniform samples on [lo, hi):
// positions lo + i*(hi-lo)/n for i = 0..n-1, linear interpolation between
// samples, zero outside.
struct SampledFunction {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> samples;

  double spacing() const { return (hi - lo) / double(samples.size()); }
  double operator()(double x) const;
  double sup_abs() const;
  double l2norm() const;  // trapezoid over the samples

  static SampledFunction indicator(double lo, double hi, int n);
  // smooth bump exp(1 - 1/(1-t^2)) on (lo, hi), peak 1 at the midpoint
  static SampledFunction bump(double lo, double hi, int n);
  static SampledFunction constant(double lo, double hi, int n, double value);
};

struct MultiplierPair {
  SampledFunction F;
  SampledFunction chi;
  int ell = 0;
};

MultiplierPair multiplier_from_json(const std::string& json_text);
std::string multiplier_to_json(const MultiplierPair& mp);

// ||F||_{M,2} = ( (1/M) sum_K sup_{[(K-1)/M, K/M)} |F|^2 )^{1/2}, the sup
// approximated by the max over samples; requires spacing <= 1/(4M)
double cowling_sikora_norm(const SampledFunction& F, double M);

struct SandwichReport {
  double l2 = 0.0;
  double cs = 0.0;
  bool holds = false;  // l2 <= cs * (1 + slack)
  double slack = 0.01;
};

SandwichReport norm_lower_sandwich_check(const SampledFunction& F, double M);

struct QuadConfig {
  int sphere_level = 1;   // node-count multiplier for the sphere rule
  int radial_points = 32; // per-k radial nodes in the Plancherel integral
  int s_points = 48;      // sigma nodes for the r0 > 0 measure
  int tau_points = 128;   // tau nodes in the convolution-kernel evaluator

  QuadConfig doubled() const {
    return {2 * sphere_level, 2 * radial_points, 2 * s_points, 2 * tau_points};
  }
};

struct SphereNode {
  Vector omega;
  double weight;
};

// d2 = 1: the two-point measure; d2 = 2: trapezoid on the circle;
// d2 = 3: product Gauss-Legendre x uniform rule
std::vector<SphereNode> sphere_quadrature(int d2, int level);

// ||K_ell||_2 of the convolution kernel of F(L) chi(2^ell U) via the
// Plancherel formula (polar mu-integral over the sphere nodes, exact
// per-member radial windows, lattice truncated by supp F)
double plancherel_kernel_norm(const GroupSpec& spec, const MultiplierPair& mp,
                              const QuadConfig& quad = {});

// smallest l0 such that the kernel vanishes for all ell < -l0, from
// m* = min over sphere nodes of sum_n r_n b_n^omega
int ell0_threshold(const GroupSpec& spec, double A_lo, double A_hi,
                   double chi_lo, double chi_hi, const QuadConfig& quad = {});

// pointwise convolution kernel of F(L) chi(2^ell U) at (x, u)
cd conv_kernel_eval(const GroupSpec& spec, const MultiplierPair& mp,
                    const Vector& x, const Vector& u,
                    const QuadConfig& quad = {});

}  // namespace subspec
