#pragma once

#include "subspec/grid.hpp"
#include "subspec/laguerre.hpp"

namespace subspec {

// Kernel values at all lattice differences (i-j)h of a 2D grid, with the
// second axis stored reversed so inner convolution loops are contiguous.
struct DiffProfile2D {
  int n = 0;
  std::vector<cd> data;  // (2n-1) rows of length (2n-1)

  cd at(int di, int dj) const {  // di, dj in [-(n-1), n-1]
    return data[std::size_t(di + n - 1) * (2 * n - 1) +
                std::size_t(n - 1 - dj)];
  }
  const cd* reversed_row(int di) const {
    return data.data() + std::size_t(di + n - 1) * (2 * n - 1);
  }
};

DiffProfile2D diff_profile_from_field(const Field& g);
DiffProfile2D diff_profile_from_radial(
    const Grid& g, const std::function<cd(double r2)>& radial);

// f x g over the grid with twist parameter b (signed), fast 2D path
Field twisted_apply_2d(const Field& f, double b_signed,
                       const DiffProfile2D& D);

// (b,r)-twisted convolution of two grid functions on a common grid;
// dim must equal p.d1() with r0 = 0. Uses the fast path for a single
// 2D block, a direct per-pair loop otherwise.
Field twisted_convolution(const Field& f, const Field& g,
                          const BlockParams& p);

// twisted convolution against a closed-form kernel (evaluated at exact
// difference points, no sampling of the kernel on the grid)
Field twisted_convolution_kernel(
    const Field& f, const BlockParams& p,
    const std::function<cd(const double* diff)>& kernel);

// spectral projection P_k f = f x (c phi_k) on the grid
Field apply_projection(const Field& f, const TwistedKernel& K);

// blockwise -Lap + (1/4) b^2 |z|^2 - i b omega(z, grad) by second-order
// central differences (zero extension outside the grid); requires r0 = 0
// and h <= 0.2
Field apply_twisted_laplacian(const Field& f, const BlockParams& p);

// true if both inputs decay below 1e-10 at the grid boundary
bool boundary_decay_ok(const Field& f, double threshold = 1e-10);

}  // namespace subspec
