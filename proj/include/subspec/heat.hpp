#pragma once

#include <cstdint>
#include <vector>

#include "subspec/grid.hpp"
#include "subspec/laguerre.hpp"

namespace subspec {

// Complex time in the right half-plane, optionally flagged against the
// admissibility rectangle {0 < Re <= 1, |Im| <= alpha}.
struct ComplexTime {
  cd zeta;
  double alpha = 0.0;
  bool in_rectangle = false;

  static ComplexTime make(cd zeta, double alpha = 0.0) {
    if (zeta.real() <= 0.0)
      throw config_error("ComplexTime: Re(zeta) must be positive");
    ComplexTime t;
    t.zeta = zeta;
    t.alpha = alpha;
    t.in_rectangle = zeta.real() <= 1.0 && std::abs(zeta.imag()) <= alpha;
    return t;
  }
};

// S(z) = z/sin z and T(z) = z/tan z with the removable singularity at 0
// filled by 1; near-zero arguments use a short Taylor series, arguments
// within 1e-8 of a pole k*pi (k != 0) raise numeric_error.
cd s_fn(cd z);
cd t_fn(cd z);

// Mehler heat kernel at complex time zeta (principal branches); x in
// block layout R^{r0} + R^{2r_1} + ...; b_n = 0 degenerates to a Gaussian
// factor on that block.
cd heat_kernel(cd zeta, const BlockParams& p, const double* x);

// twisted convolution of f with the heat kernel (r0 = 0)
Field heat_apply(const Field& f, cd zeta, const BlockParams& p);

struct DispersiveSample {
  cd zeta;
  double sup_value = 0.0;    // sup_x |p_zeta(x)|, realized at x = 0
  double bound_value = 0.0;  // sup_value * |zeta|^{d1/2}
};

struct DispersiveReport {
  std::vector<DispersiveSample> samples;
  double max_constant = 0.0;  // max of bound_value over the rectangle samples
  bool sup_at_origin_ok = true;
};

DispersiveReport dispersive_scan(const BlockParams& p, double alpha,
                                 int n_samples, std::uint64_t seed);

// F_K(lambda) = (2/pi) (x - sin x)/x^3 with x = lambda - K
double fejer_F(int K, double lambda);

// max over xi in [-1.25, 1.25] of |numerical FT of F_K - (1-|xi|)_+^2 e^{-i K xi}|
double fejer_fourier_check(int K);

}  // namespace subspec
