#pragma once

#include <cstdint>

#include "subspec/grid.hpp"
#include "subspec/laguerre.hpp"

namespace subspec {

// spectral cluster 1_{[K, K+1)} of the anisotropic twisted Laplacian
struct ClusterSpec {
  int K = 0;
  BlockParams p;
  double c = 0.0;  // projection normalization; 0 picks (2 pi)^{-sum r_n}

  double normalization() const {
    return c > 0.0 ? c : projection_normalization(p);
  }
};

std::vector<LatticePoint> cluster_members(const ClusterSpec& cs);

// exact L1 -> L2 norm from the kernel diagonal:
// sqrt(c * sum_k prod_n b_n^{r_n} binom(k_n + r_n - 1, k_n)); 0 when empty
double norm_1to2_exact(const ClusterSpec& cs);

struct ScalingCheck {
  double ratio = 0.0;     // rescaled norm / unit norm
  double expected = 0.0;  // |mu|^{d1/4}
  double residual = 0.0;  // relative difference
};

// the |mu|-rescaled cluster [K|mu|, (K+1)|mu|) with frequencies |mu| b
// against |mu|^{d1/4} times the unit cluster, via the diagonal formula
ScalingCheck scaling_identity_check(const ClusterSpec& cs, double mu_norm);

struct PowerMethodOptions {
  int restarts = 2;              // random restarts besides the bump start
  std::uint64_t seed = 42;
  int max_iterations = 500;
  double rel_tol = 1e-9;
  enum class Backend { automatic, kernel, basis } backend = Backend::automatic;
};

struct PowerMethodResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

// lower bound on the discretized ||1_{[K,K+1)}||_{p->2} via the alternating
// power method for mixed-norm operator norms; single 2D block only
PowerMethodResult norm_p_to_2_lower(const ClusterSpec& cs, double p,
                                    const Grid& grid,
                                    const PowerMethodOptions& opts = {});

struct ExponentFit {
  std::vector<double> xs, ys;  // log(K+1), log(norm)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of fit residuals
  int K_min = 0;
  int K_max = 0;
};

// least-squares slope of log(norm) against log(K+1) over the nonempty
// clusters with K >= K_min; needs at least 8 samples
ExponentFit fit_exponent(const std::vector<std::pair<int, double>>& series,
                         int K_min);

// Hermitian grid operator for a single-block 2D cluster projection; used
// by the power method and exposed for the self-adjointness/idempotency
// checks. The basis backend factorizes through special Hermite functions,
// the kernel backend applies the summed twisted-convolution kernel.
class ClusterGridOp {
 public:
  ClusterGridOp(const ClusterSpec& cs, const Grid& grid, bool use_basis);
  Field apply(const Field& f) const;
  int rank_hint() const { return int(columns_.size()); }

 private:
  Grid grid_;
  bool use_basis_ = false;
  // kernel backend
  std::vector<cd> profile_;  // DiffProfile2D data
  double b_ = 0.0;
  // basis backend
  std::vector<std::vector<cd>> columns_;
};

}  // namespace subspec
