#include "subspec/grid.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

#include "subspec/kernels.hpp"

namespace subspec {

double Field::norm2() const {
  return std::sqrt(kernels::ops().znorm2sq(values.data(), values.size()) *
                   grid.weight());
}

double Field::norm_p(double p) const {
  if (p == 2.0) return norm2();
  double s = 0.0;
  for (const cd& v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * grid.weight(), 1.0 / p);
}

double Field::boundary_max_abs() const {
  double m = 0.0;
  std::vector<int> idx(grid.dim);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    unflatten(grid, flat, idx.data());
    bool boundary = false;
    for (int d = 0; d < grid.dim; ++d)
      if (idx[d] == 0 || idx[d] == grid.n - 1) boundary = true;
    if (boundary) m = std::max(m, std::abs(values[flat]));
  }
  return m;
}

Field sample_field(const Grid& g, const std::function<cd(const double*)>& fn) {
  Field f(g);
  std::vector<int> idx(g.dim);
  std::vector<double> x(g.dim);
  for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
    unflatten(g, flat, idx.data());
    for (int d = 0; d < g.dim; ++d) x[d] = g.coord(idx[d]);
    f.values[flat] = fn(x.data());
  }
  return f;
}

void unflatten(const Grid& g, std::size_t flat, int* idx) {
  for (int d = g.dim - 1; d >= 0; --d) {
    idx[d] = int(flat % g.n);
    flat /= g.n;
  }
}

void save_field(const Field& f, const std::string& path_prefix) {
  nlohmann::json sidecar;
  sidecar["dim"] = f.grid.dim;
  sidecar["n"] = f.grid.n;
  sidecar["spacing"] = f.grid.h;
  sidecar["origin"] = f.grid.origin;
  sidecar["dtype"] = "complex128";
  std::ofstream js(path_prefix + ".json");
  if (!js) throw config_error("save_field: cannot open " + path_prefix + ".json");
  js << sidecar.dump(2) << "\n";

  std::ofstream bin(path_prefix + ".bin", std::ios::binary);
  if (!bin) throw config_error("save_field: cannot open " + path_prefix + ".bin");
  bin.write(reinterpret_cast<const char*>(f.values.data()),
            std::streamsize(f.values.size() * sizeof(cd)));
}

Field load_field(const std::string& path_prefix) {
  std::ifstream js(path_prefix + ".json");
  if (!js) throw config_error("load_field: missing sidecar " + path_prefix + ".json");
  nlohmann::json sidecar = nlohmann::json::parse(js);
  Grid g;
  g.dim = sidecar.at("dim").get<int>();
  g.n = sidecar.at("n").get<int>();
  g.h = sidecar.at("spacing").get<double>();
  g.origin = sidecar.at("origin").get<double>();
  Field f(g);
  std::ifstream bin(path_prefix + ".bin", std::ios::binary);
  if (!bin) throw config_error("load_field: missing data " + path_prefix + ".bin");
  bin.read(reinterpret_cast<char*>(f.values.data()),
           std::streamsize(f.values.size() * sizeof(cd)));
  if (std::size_t(bin.gcount()) != f.values.size() * sizeof(cd))
    throw config_error("load_field: truncated data file");
  return f;
}

}  // namespace subspec
