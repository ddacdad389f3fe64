#pragma once

#include <functional>

#include "subspec/restriction.hpp"

namespace subspec {

// Function on the product grid (x1, x2, u); u is the contiguous axis.
struct JointField {
  int nx = 0;
  double hx = 0.0, x0 = 0.0;
  int nu = 0;
  double hu = 0.0, u0 = 0.0;
  std::vector<cd> values;  // ((ix1*nx)+ix2)*nu + iu

  static JointField make(int nx, double Lx, int nu, double Lu);
  double xcoord(int i) const { return x0 + i * hx; }
  double ucoord(int i) const { return u0 + i * hu; }
  double cell() const { return hx * hx * hu; }
  double norm2() const;
  double norm1() const;
};

JointField sample_joint(
    int nx, double Lx, int nu, double Lu,
    const std::function<cd(double, double, double)>& fn);

struct JointOptions {
  int k_cap = 96;              // truncation of the per-mu expansion
  bool compute_capture = true; // track captured spectral mass
  bool want_output = true;     // synthesize the output field
};

struct JointReport {
  JointField output;
  double captured_fraction = 1.0;
  bool capture_flag = false;  // set when captured_fraction < 0.999
  double output_l2 = 0.0;
  // Plancherel sum over (mu, k) of |F(lambda_k^mu) chi(2^ell |mu|)|^2 (P_k f, f)
  double spectral_l2sq = 0.0;
};

// F(L) chi(2^ell U) on the discretized first Heisenberg group: partial
// DFT along the center, per-frequency Laguerre projection expansion with
// a combined multiplier kernel, inverse DFT. The mu = 0 fiber is a plain
// Fourier multiplier F(|xi|^2) chi(0).
JointReport apply_joint_multiplier(const GroupSpec& spec, const JointField& f,
                                   const MultiplierPair& mp,
                                   const JointOptions& opts = {});

}  // namespace subspec
