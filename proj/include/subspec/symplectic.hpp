#pragma once

#include <functional>

#include "subspec/group.hpp"

namespace subspec {

// Spectral data of -J_mu^2 with the symplectic block normalization:
// frequencies b_1 > ... > b_N > 0, multiplicities r_n, radical dimension r0,
// orthogonal projections P_0 (radical), P_1, ..., P_N, and an orthogonal
// R with P_n^mu R = R P_n, where P_n projects onto the n-th coordinate
// block of R^{r0} + R^{2r_1} + ... + R^{2r_N}. On each block the basis is
// normalized so that omega_mu matches b_n times the standard symplectic
// form (block columns ordered [Re w_1..Re w_r | Im w_1..Im w_r]).
struct MuDecomposition {
  Vector mu;
  std::vector<double> b;   // strictly decreasing
  std::vector<int> r;
  int r0 = 0;
  std::vector<Matrix> projections;  // size N+1, index 0 = radical
  Matrix rotation;
  double cluster_tol = 0.0;

  // residuals recorded at construction time
  double spectral_residual = 0.0;     // ||-J^2 - sum b_n^2 P_n||
  double symplectic_residual = 0.0;   // max block ||omega - b*omega_std||
  double rotation_residual = 0.0;     // ||R^T R - I||
  double projector_residual = 0.0;    // max ||P^2-P||, ||P_n P_m||, ||sum P - I||

  int n_blocks() const { return int(b.size()); }
};

MuDecomposition decompose(const GroupSpec& spec, const Vector& mu,
                          double cluster_tol = 1e-6);

struct HomogeneityReport {
  bool signature_match = false;
  double b_residual = 0.0;  // max relative |b^{s mu} - s b^mu|
  double p_residual = 0.0;  // max ||P_n^{s mu} - P_n^mu||
  std::string message;
};

HomogeneityReport check_homogeneity(const GroupSpec& spec, const Vector& mu,
                                    double s, double cluster_tol = 1e-6);

// Compares the mu-twisted Laplacian applied to a smooth test function
// against the anisotropic block operator applied to the rotated test
// function, both via second-order central differences with spacing h.
// Returns the relative l2 difference over the evaluation nodes; O(h^2).
double conjugation_residual(const GroupSpec& spec, const Vector& mu, double h,
                            double cluster_tol = 1e-6);

std::string decomposition_to_json(const MuDecomposition& dec,
                                  bool include_matrices = false);

}  // namespace subspec
