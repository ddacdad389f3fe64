#include "subspec/group.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/SVD>
#include <random>
#include <sstream>

namespace subspec {

Matrix j_of_mu(const GroupSpec& spec, const Vector& mu) {
  if (mu.size() != spec.d2)
    throw config_error("j_of_mu: mu has length " + std::to_string(mu.size()) +
                       ", expected d2=" + std::to_string(spec.d2));
  Matrix J = Matrix::Zero(spec.d1, spec.d1);
  for (int k = 0; k < spec.d2; ++k) J += mu[k] * spec.structure[k];
  return J;
}

ValidationReport validate(const GroupSpec& spec) {
  ValidationReport rep;
  if (spec.d1 < 1) rep.failures.push_back("d1 < 1");
  if (spec.d2 < 1) rep.failures.push_back("d2 < 1");
  if (int(spec.structure.size()) != spec.d2)
    rep.failures.push_back("structure list has " +
                           std::to_string(spec.structure.size()) +
                           " matrices, expected d2=" + std::to_string(spec.d2));
  for (const Matrix& J : spec.structure) {
    if (J.rows() != spec.d1 || J.cols() != spec.d1) {
      rep.failures.push_back("structure matrix is not d1 x d1");
      rep.passed = false;
      return rep;
    }
    double res = (J + J.transpose()).cwiseAbs().maxCoeff();
    rep.skew_residual = std::max(rep.skew_residual, res);
  }
  if (rep.skew_residual > 1e-12)
    rep.failures.push_back("skew-symmetry residual " +
                           std::to_string(rep.skew_residual) + " > 1e-12");

  if (int(spec.structure.size()) == spec.d2 && spec.d1 >= 1) {
    // rank of the d2 x d1^2 stacking = number of independent J^(k)
    Matrix stack(spec.d2, spec.d1 * spec.d1);
    for (int k = 0; k < spec.d2; ++k) {
      Matrix Jk = spec.structure[k];
      for (int i = 0; i < spec.d1; ++i)
        for (int j = 0; j < spec.d1; ++j)
          stack(k, i * spec.d1 + j) = Jk(i, j);
    }
    Eigen::JacobiSVD<Matrix> svd(stack);
    double tol = 1e-10 * std::max(1.0, svd.singularValues()(0));
    rep.stacking_rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol) ++rep.stacking_rank;
    if (rep.stacking_rank != spec.d2)
      rep.failures.push_back("structure matrices are linearly dependent: rank " +
                             std::to_string(rep.stacking_rank) + " < d2=" +
                             std::to_string(spec.d2));
  }
  rep.passed = rep.failures.empty();
  return rep;
}

GroupClass classify(const GroupSpec& spec, int samples, std::uint64_t seed) {
  if (samples < 1) throw config_error("classify: samples must be >= 1");
  GroupClass cls;
  cls.samples = samples;
  cls.probabilistic = true;
  cls.min_singular_value = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(stream_seed(seed, 0x61u));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Matrix I = Matrix::Identity(spec.d1, spec.d1);

  bool htype = true, metivier = true;
  for (int s = 0; s < samples; ++s) {
    Vector mu(spec.d2);
    do {
      for (int k = 0; k < spec.d2; ++k) mu[k] = gauss(rng);
    } while (mu.norm() < 1e-8);
    mu /= mu.norm();
    cls.sampled_mu.push_back(mu);

    Matrix J = j_of_mu(spec, mu);
    double h_res = (J * J + I).norm();  // Frobenius
    cls.max_htype_residual = std::max(cls.max_htype_residual, h_res);
    if (h_res > 1e-10) htype = false;

    Eigen::JacobiSVD<Matrix> svd(J);
    double smin = svd.singularValues().tail(1)(0);
    cls.min_singular_value = std::min(cls.min_singular_value, smin);
    if (smin < 1e-10) metivier = false;
  }

  if (htype)
    cls.type = GroupType::HeisenbergType;
  else if (metivier)
    cls.type = GroupType::Metivier;
  else
    cls.type = GroupType::General;
  return cls;
}

Rational stein_tomas_exponent(int n) {
  if (n < 1) throw config_error("stein_tomas_exponent: n must be >= 1");
  return Rational(2 * (n + 1), n + 3);
}

Rational theta_interpolation(Rational p, Rational p_min) {
  Rational one(1);
  if (p < one || p_min < p || Rational(2) < p_min)
    throw config_error("theta_interpolation: need 1 <= p <= p_min <= 2");
  if (p == p_min) return one;  // covers p = p_min = 1 as well
  // 1/p = (1-theta) + theta/p_min  =>  theta = (1 - 1/p)/(1 - 1/p_min)
  return (one - one / p) / (one - one / p_min);
}

GroupSpec preset_heisenberg(int m) {
  if (m < 1) throw config_error("heisenberg preset: m must be >= 1");
  GroupSpec spec;
  spec.d1 = 2 * m;
  spec.d2 = 1;
  Matrix J = Matrix::Zero(2 * m, 2 * m);
  J.topRightCorner(m, m) = -Matrix::Identity(m, m);
  J.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
  spec.structure = {J};
  spec.label = "heisenberg:" + std::to_string(m);
  return spec;
}

GroupSpec preset_htype_quaternion() {
  GroupSpec spec;
  spec.d1 = 4;
  spec.d2 = 3;
  // left multiplication by i, j, k on the quaternions in basis (1,i,j,k)
  Matrix Li(4, 4), Lj(4, 4), Lk(4, 4);
  Li << 0, -1, 0, 0,
        1,  0, 0, 0,
        0,  0, 0, -1,
        0,  0, 1, 0;
  Lj << 0, 0, -1, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, -1, 0, 0;
  Lk << 0, 0, 0, -1,
        0, 0, -1, 0,
        0, 1, 0, 0,
        1, 0, 0, 0;
  spec.structure = {Li, Lj, Lk};
  spec.label = "htype-quaternion";
  return spec;
}

GroupSpec preset_metivier_aniso(double b1, double b2) {
  if (b1 <= 0 || b2 <= 0)
    throw config_error("metivier-aniso preset: block speeds must be positive");
  GroupSpec spec;
  spec.d1 = 4;
  spec.d2 = 1;
  Matrix J = Matrix::Zero(4, 4);
  J(0, 1) = -b1; J(1, 0) = b1;
  J(2, 3) = -b2; J(3, 2) = b2;
  spec.structure = {J};
  std::ostringstream lbl;
  lbl << "metivier-aniso:" << b1 << "," << b2;
  spec.label = lbl.str();
  return spec;
}

GroupSpec preset_free_n32() {
  GroupSpec spec;
  spec.d1 = 3;
  spec.d2 = 3;
  // J^(k) x = e_k x x (cross product), so mu([x,x']) = det(mu, x, x')
  Matrix J1 = Matrix::Zero(3, 3), J2 = Matrix::Zero(3, 3), J3 = Matrix::Zero(3, 3);
  J1(1, 2) = -1; J1(2, 1) = 1;
  J2(0, 2) = 1;  J2(2, 0) = -1;
  J3(0, 1) = -1; J3(1, 0) = 1;
  spec.structure = {J1, J2, J3};
  spec.label = "free-n32";
  return spec;
}

GroupSpec preset_by_name(const std::string& name) {
  auto colon = name.find(':');
  std::string base = name.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (base == "heisenberg") {
    int m = args.empty() ? 1 : std::stoi(args);
    return preset_heisenberg(m);
  }
  if (base == "htype-quaternion") return preset_htype_quaternion();
  if (base == "metivier-aniso") {
    double b1 = 1, b2 = 3;
    if (!args.empty()) {
      auto comma = args.find(',');
      if (comma == std::string::npos)
        throw config_error("metivier-aniso preset needs two speeds, e.g. metivier-aniso:1,3");
      b1 = std::stod(args.substr(0, comma));
      b2 = std::stod(args.substr(comma + 1));
    }
    return preset_metivier_aniso(b1, b2);
  }
  if (base == "free-n32") return preset_free_n32();
  throw config_error("unknown group preset: " + name);
}

GroupSpec group_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  GroupSpec spec;
  spec.label = j.value("label", "");
  spec.d1 = j.at("d1").get<int>();
  spec.d2 = j.at("d2").get<int>();
  if (spec.d1 < 1 || spec.d2 < 1)
    throw config_error("group json: d1 and d2 must be >= 1");
  for (const auto& mat : j.at("structure")) {
    Matrix J(spec.d1, spec.d1);
    if (int(mat.size()) != spec.d1)
      throw config_error("group json: structure matrix row count != d1");
    for (int r = 0; r < spec.d1; ++r) {
      if (int(mat[r].size()) != spec.d1)
        throw config_error("group json: structure matrix column count != d1");
      for (int c = 0; c < spec.d1; ++c) J(r, c) = mat[r][c].get<double>();
    }
    spec.structure.push_back(J);
  }
  if (int(spec.structure.size()) != spec.d2)
    throw config_error("group json: expected d2 structure matrices");
  return spec;
}

std::string group_to_json(const GroupSpec& spec) {
  nlohmann::json j;
  j["label"] = spec.label;
  j["d1"] = spec.d1;
  j["d2"] = spec.d2;
  auto mats = nlohmann::json::array();
  for (const Matrix& J : spec.structure) {
    auto rows = nlohmann::json::array();
    for (int r = 0; r < spec.d1; ++r) {
      auto row = nlohmann::json::array();
      for (int c = 0; c < spec.d1; ++c) row.push_back(J(r, c));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  j["structure"] = mats;
  return j.dump();
}

const char* group_type_name(GroupType t) {
  switch (t) {
    case GroupType::HeisenbergType: return "HeisenbergType";
    case GroupType::Metivier: return "Metivier";
    default: return "General";
  }
}

}  // namespace subspec
