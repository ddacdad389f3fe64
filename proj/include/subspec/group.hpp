#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "subspec/common.hpp"

namespace subspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A two-step group presented by the skew-symmetric structure matrices
// J^(1),...,J^(d2) of its bracket: J_mu = sum_k mu_k J^(k), and
// mu([x,x']) = <J_mu x, x'>. The bracket itself is recovered as
// [x,x']_k = <J^(k) x, x'>.
struct GroupSpec {
  int d1 = 0;
  int d2 = 0;
  std::vector<Matrix> structure;
  std::string label;
};

struct ValidationReport {
  bool passed = false;
  double skew_residual = 0.0;  // max entrywise |J + J^T| over all J^(k)
  int stacking_rank = 0;       // rank of the d2 x d1^2 stacking
  std::vector<std::string> failures;
};

enum class GroupType { HeisenbergType, Metivier, General };

struct GroupClass {
  GroupType type = GroupType::General;
  bool probabilistic = false;  // sample-based for non-preset specs
  int samples = 0;
  double max_htype_residual = 0.0;  // max ||J_mu^2 + I||_F over unit samples
  double min_singular_value = 0.0;  // min over samples of sigma_min(J_mu)
  std::vector<Vector> sampled_mu;
};

Matrix j_of_mu(const GroupSpec& spec, const Vector& mu);

ValidationReport validate(const GroupSpec& spec);

GroupClass classify(const GroupSpec& spec, int samples, std::uint64_t seed);

// p_n = 2(n+1)/(n+3)
Rational stein_tomas_exponent(int n);

// theta solving 1/p = (1-theta) + theta/p_min, for 1 <= p <= p_min <= 2
Rational theta_interpolation(Rational p, Rational p_min);

// Presets: heisenberg(m), htype-quaternion, metivier-aniso(b1,b2), free-n32
GroupSpec preset_heisenberg(int m);
GroupSpec preset_htype_quaternion();
GroupSpec preset_metivier_aniso(double b1, double b2);
GroupSpec preset_free_n32();

// Parses "heisenberg:2", "metivier-aniso:1,3", "htype-quaternion",
// "free-n32". Throws config_error for unknown names.
GroupSpec preset_by_name(const std::string& name);

GroupSpec group_from_json(const std::string& json_text);
std::string group_to_json(const GroupSpec& spec);

const char* group_type_name(GroupType t);

}  // namespace subspec
