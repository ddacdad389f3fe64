#pragma once

#include <functional>
#include <string>
#include <vector>

#include "subspec/common.hpp"

namespace subspec {

// Uniform centered grid, same axis layout in every dimension:
// x_i = origin + i*h, i = 0..n-1, origin = -n*h/2, so differences of grid
// points land on the lattice (i-j)*h.
struct Grid {
  int dim = 0;
  int n = 0;
  double h = 0.0;
  double origin = 0.0;

  static Grid centered(int dim, int n, double extent) {
    if (dim < 1 || dim > 4) throw config_error("Grid: dim must be in 1..4");
    if (n < 2) throw config_error("Grid: n must be >= 2");
    Grid g;
    g.dim = dim;
    g.n = n;
    g.h = 2.0 * extent / n;
    g.origin = -extent;
    return g;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= std::size_t(n);
    return s;
  }
  double coord(int i) const { return origin + i * h; }
  double weight() const {
    double w = 1.0;
    for (int i = 0; i < dim; ++i) w *= h;
    return w;
  }
  bool compatible(const Grid& o) const {
    return dim == o.dim && n == o.n && h == o.h && origin == o.origin;
  }
};

struct Field {
  Grid grid;
  std::vector<cd> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.size(), cd(0.0, 0.0)) {}

  cd& at(std::size_t flat) { return values[flat]; }
  const cd& at(std::size_t flat) const { return values[flat]; }

  double norm2() const;                  // quadrature-weighted L2 norm
  double norm_p(double p) const;         // quadrature-weighted Lp norm
  double boundary_max_abs() const;       // max |f| over boundary nodes
};

// fill from a callable taking the coordinate vector
Field sample_field(const Grid& g, const std::function<cd(const double*)>& fn);

// decode flat index -> per-axis indices
void unflatten(const Grid& g, std::size_t flat, int* idx);

// flat binary (interleaved re/im doubles) + JSON sidecar (shape, spacing,
// origin); path gets .bin and .json suffixes
void save_field(const Field& f, const std::string& path_prefix);
Field load_field(const std::string& path_prefix);

}  // namespace subspec
