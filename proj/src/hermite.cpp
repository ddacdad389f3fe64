#include "subspec/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "subspec/laguerre.hpp"

namespace subspec {

void gauss_hermite(int order, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  if (order < 1) throw config_error("gauss_hermite: order must be >= 1");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(order, order);
  for (int i = 0; i + 1 < order; ++i) {
    double off = std::sqrt(0.5 * (i + 1));
    T(i, i + 1) = off;
    T(i + 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  nodes.resize(order);
  weights.resize(order);
  const double mu0 = std::sqrt(pi);
  for (int i = 0; i < order; ++i) {
    nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

double hermite_function(int n, double x) {
  double h0 = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return h0;
  double h1 = std::sqrt(2.0) * x * h0;
  for (int m = 2; m <= n; ++m) {
    double h2 = std::sqrt(2.0 / m) * x * h1 - std::sqrt(double(m - 1) / m) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

cd special_hermite(const std::vector<int>& alpha, const std::vector<int>& beta,
                   double lambda, const std::vector<double>& z, int order) {
  if (lambda <= 0.0) throw config_error("special_hermite: lambda must be positive");
  const int m = int(alpha.size());
  if (int(beta.size()) != m || int(z.size()) != 2 * m)
    throw config_error("special_hermite: index/point dimension mismatch");
  int deg = 0;
  for (int j = 0; j < m; ++j) {
    if (alpha[j] < 0 || beta[j] < 0)
      throw config_error("special_hermite: negative index");
    deg = std::max(deg, alpha[j] + beta[j]);
  }
  double zsq = 0.0;
  for (double v : z) zsq += v * v;
  if (order == 0) order = deg + 32 + int(std::ceil(0.5 * lambda * zsq));
  if (order < deg + 16)
    throw config_error("special_hermite: quadrature order insufficient "
                       "(need >= |alpha|+|beta|+16)");
  if (order > 300)
    throw config_error("special_hermite: requested quadrature order too "
                       "large for double precision weights");

  std::vector<double> s, w;
  gauss_hermite(order, s, w);
  // fold the Gaussian of the weight back into the integrand values
  std::vector<double> what(order);
  for (int q = 0; q < order; ++q) what[q] = w[q] * std::exp(s[q] * s[q]);

  const double sl = std::sqrt(lambda);
  cd prod = std::pow(2.0 * pi, -0.5 * m) * std::pow(lambda, 0.5 * m);
  for (int j = 0; j < m; ++j) {
    const double a = z[j];
    const double b = z[m + j];
    const double c = 0.5 * sl * b;
    cd acc = 0.0;
    for (int q = 0; q < order; ++q) {
      double re = hermite_function(alpha[j], s[q] + c) *
                  hermite_function(beta[j], s[q] - c);
      double phase = sl * a * s[q];
      acc += what[q] * re * cd(std::cos(phase), std::sin(phase));
    }
    prod *= acc;
  }
  return prod;
}

cd special_hermite_m1(int alpha, int beta, double lambda, double z1,
                      double z2) {
  if (lambda <= 0.0) throw config_error("special_hermite_m1: lambda > 0 required");
  if (alpha < 0 || beta < 0) throw config_error("special_hermite_m1: negative index");
  const double sl = std::sqrt(lambda);
  const double a = sl * z1, b = sl * z2;
  // w = (b + i a)/sqrt(2); amplitudes against the displaced vacuum
  const cd w = cd(b, a) / std::sqrt(2.0);
  const double x = std::norm(w);

  const int lo = std::min(alpha, beta);
  const int d = std::abs(alpha - beta);
  const double wabs = std::abs(w);
  if (d > 0 && wabs == 0.0) return cd(0.0, 0.0);
  // sqrt(lo!/hi!) * |w|^d as a stable running product
  double scale = 1.0;
  for (int j = lo + 1; j <= lo + d; ++j) scale *= wabs / std::sqrt(double(j));
  cd dir(1.0, 0.0);
  if (d > 0) {
    cd u = (beta > alpha ? -std::conj(w) : w) / wabs;
    dir = std::pow(u, d);
  }
  cd M = scale * dir * laguerre_scaled(lo, d, x);
  return std::pow(2.0 * pi, -0.5) * sl * M;
}

}  // namespace subspec
