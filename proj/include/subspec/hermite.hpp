#pragma once

#include <vector>

#include "subspec/common.hpp"

namespace subspec {

// Matrix coefficients Phi_{alpha,beta}^lambda of the Schroedinger
// representation against rescaled Hermite functions; eigenfunctions of the
// lambda-twisted Laplacian with eigenvalue (2|beta|_1 + m) lambda.

// Quadrature route: one-dimensional Gauss-Hermite per coordinate pair.
// order = 0 picks a default; order < |alpha|+|beta|+16 raises config_error.
cd special_hermite(const std::vector<int>& alpha, const std::vector<int>& beta,
                   double lambda, const std::vector<double>& z, int order = 0);

// Closed-form route for m = 1 (displaced-oscillator amplitudes evaluated
// through scaled Laguerre polynomials); exact counterpart of the
// quadrature route, usable at large indices.
cd special_hermite_m1(int alpha, int beta, double lambda, double z1, double z2);

// Gauss-Hermite nodes/weights for weight exp(-s^2) (Golub-Welsch)
void gauss_hermite(int order, std::vector<double>& nodes,
                   std::vector<double>& weights);

// orthonormal Hermite function h_n(x) (weight exp(-x^2/2), L2-normalized)
double hermite_function(int n, double x);

}  // namespace subspec
