#include "subspec/restriction.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "subspec/laguerre.hpp"

namespace subspec {

double SampledFunction::operator()(double x) const {
  if (samples.empty()) return 0.0;
  const double dx = spacing();
  const double t = (x - lo) / dx;
  if (t < 0.0) return 0.0;
  const auto i = std::size_t(t);
  if (i >= samples.size() - 1) {
    // beyond the last sample: zero outside the sampled range
    return t <= double(samples.size() - 1) ? samples.back() : 0.0;
  }
  const double frac = t - double(i);
  return samples[i] * (1.0 - frac) + samples[i + 1] * frac;
}

double SampledFunction::sup_abs() const {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  return m;
}

double SampledFunction::l2norm() const {
  if (samples.size() < 2) return 0.0;
  const double dx = spacing();
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double w = (i == 0 || i == samples.size() - 1) ? 0.5 : 1.0;
    s += w * samples[i] * samples[i];
  }
  return std::sqrt(s * dx);
}

SampledFunction SampledFunction::indicator(double lo, double hi, int n) {
  if (!(lo < hi) || n < 2) throw config_error("indicator: bad support");
  return {lo, hi, std::vector<double>(std::size_t(n), 1.0)};
}

SampledFunction SampledFunction::bump(double lo, double hi, int n) {
  if (!(lo < hi) || n < 2) throw config_error("bump: bad support");
  SampledFunction f{lo, hi, std::vector<double>(std::size_t(n), 0.0)};
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    double x = lo + i * f.spacing();
    double t = (x - mid) / half;
    if (std::abs(t) < 1.0) f.samples[i] = std::exp(1.0 - 1.0 / (1.0 - t * t));
  }
  return f;
}

SampledFunction SampledFunction::constant(double lo, double hi, int n,
                                          double value) {
  if (!(lo < hi) || n < 2) throw config_error("constant: bad support");
  return {lo, hi, std::vector<double>(std::size_t(n), value)};
}

MultiplierPair multiplier_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  auto parse_fn = [](const nlohmann::json& o) {
    SampledFunction f;
    f.lo = o.at("support").at(0).get<double>();
    f.hi = o.at("support").at(1).get<double>();
    f.samples = o.at("samples").get<std::vector<double>>();
    if (f.samples.size() < 2 || !(f.lo < f.hi))
      throw config_error("multiplier json: bad sampled function");
    return f;
  };
  MultiplierPair mp;
  mp.F = parse_fn(j.at("F"));
  mp.chi = parse_fn(j.at("chi"));
  mp.ell = j.at("ell").get<int>();
  return mp;
}

std::string multiplier_to_json(const MultiplierPair& mp) {
  nlohmann::json j;
  j["F"] = {{"support", {mp.F.lo, mp.F.hi}}, {"samples", mp.F.samples}};
  j["chi"] = {{"support", {mp.chi.lo, mp.chi.hi}}, {"samples", mp.chi.samples}};
  j["ell"] = mp.ell;
  return j.dump();
}

double cowling_sikora_norm(const SampledFunction& F, double M) {
  if (M <= 0.0) throw config_error("cowling_sikora_norm: M must be positive");
  if (F.samples.empty()) return 0.0;
  if (F.spacing() > 1.0 / (4.0 * M))
    throw config_error("cowling_sikora_norm: sampling too coarse for the "
                       "given M (need >= 4 samples per window)");
  const double dx = F.spacing();
  const long K_lo = long(std::floor(F.lo * M));
  const long K_hi = long(std::ceil(F.hi * M)) + 1;
  double total = 0.0;
  for (long K = K_lo; K <= K_hi; ++K) {
    const double wlo = double(K - 1) / M, whi = double(K) / M;
    double sup2 = 0.0;
    // samples with position in [wlo, whi)
    long i0 = long(std::ceil((wlo - F.lo) / dx - 1e-12));
    for (long i = std::max(i0, 0L); i < long(F.samples.size()); ++i) {
      double x = F.lo + double(i) * dx;
      if (x >= whi - 1e-15) break;
      sup2 = std::max(sup2, F.samples[std::size_t(i)] * F.samples[std::size_t(i)]);
    }
    total += sup2;
  }
  return std::sqrt(total / M);
}

SandwichReport norm_lower_sandwich_check(const SampledFunction& F, double M) {
  SandwichReport rep;
  rep.l2 = F.l2norm();
  rep.cs = cowling_sikora_norm(F, M);
  rep.holds = rep.l2 <= rep.cs * (1.0 + rep.slack);
  return rep;
}

std::vector<SphereNode> sphere_quadrature(int d2, int level) {
  if (level < 1) throw config_error("sphere_quadrature: level must be >= 1");
  std::vector<SphereNode> nodes;
  if (d2 == 1) {
    Vector p(1), m(1);
    p << 1.0;
    m << -1.0;
    nodes.push_back({p, 1.0});
    nodes.push_back({m, 1.0});
    return nodes;
  }
  if (d2 == 2) {
    const int n = 64 * level;
    for (int i = 0; i < n; ++i) {
      double th = 2.0 * pi * (i + 0.5) / n;
      Vector w(2);
      w << std::cos(th), std::sin(th);
      nodes.push_back({w, 2.0 * pi / n});
    }
    return nodes;
  }
  if (d2 == 3) {
    // Gauss-Legendre in cos(theta) x uniform azimuth; total weight 4 pi
    const int nt = 7 * level, nphi = 12 * level;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(nt, nt);
    for (int i = 0; i + 1 < nt; ++i) {
      double j = i + 1.0;
      double off = j / std::sqrt(4.0 * j * j - 1.0);
      T(i, i + 1) = off;
      T(i + 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    for (int i = 0; i < nt; ++i) {
      double ct = es.eigenvalues()(i);
      double wt = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
      double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int a = 0; a < nphi; ++a) {
        double phi = 2.0 * pi * (a + 0.5) / nphi;
        Vector w(3);
        w << st * std::cos(phi), st * std::sin(phi), ct;
        nodes.push_back({w, wt * 2.0 * pi / nphi});
      }
    }
    return nodes;
  }
  throw config_error("sphere_quadrature: d2 must be 1, 2, or 3");
}

namespace {

struct NodeData {
  SphereNode node;
  MuDecomposition dec;
};

// per-node decomposition with signature-drift detection
std::vector<NodeData> decompose_on_sphere(const GroupSpec& spec,
                                          const QuadConfig& quad) {
  auto nodes = sphere_quadrature(spec.d2, quad.sphere_level);
  std::vector<NodeData> out;
  for (const auto& n : nodes) out.push_back({n, decompose(spec, n.omega)});
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].dec.r != out[0].dec.r || out[i].dec.r0 != out[0].dec.r0) {
      std::ostringstream msg;
      msg << "signature drift across sphere nodes: node 0 has (N=" <<
          out[0].dec.b.size() << ", r0=" << out[0].dec.r0 << "), node " << i
          << " has (N=" << out[i].dec.b.size() << ", r0=" << out[i].dec.r0
          << ")";
      throw numeric_error(msg.str());
    }
  }
  return out;
}

// Gamma(r0/2) for small integer r0
double gamma_half(int r0) {
  if (r0 == 1) return std::sqrt(pi);
  if (r0 == 2) return 1.0;
  if (r0 == 3) return 0.5 * std::sqrt(pi);
  if (r0 == 4) return 1.0;
  return std::tgamma(0.5 * r0);
}

// nodes/weights for the measure sigma_{r0} via s = sigma^2;
// r0 = 0 collapses to the Dirac at 0
std::vector<std::pair<double, double>> radical_measure_nodes(int r0,
                                                             double s_max,
                                                             int n) {
  std::vector<std::pair<double, double>> out;
  if (r0 == 0) {
    out.push_back({0.0, 1.0});
    return out;
  }
  const double C = 2.0 * std::pow(pi, 0.5 * r0) / gamma_half(r0);
  const double sig_max = std::sqrt(s_max);
  const double d = sig_max / n;
  for (int i = 0; i < n; ++i) {
    double sig = (i + 0.5) * d;
    out.push_back({sig * sig, C * std::pow(sig, r0 - 1) * d});
  }
  return out;
}

}  // namespace

double plancherel_kernel_norm(const GroupSpec& spec, const MultiplierPair& mp,
                              const QuadConfig& quad) {
  auto nodes = decompose_on_sphere(spec, quad);
  const auto& sig = nodes[0].dec;
  const int rsum = [&] {
    int s = 0;
    for (int rn : sig.r) s += rn;
    return s;
  }();
  const double prefactor =
      std::pow(2.0 * pi, double(rsum) - double(spec.d1 + spec.d2));

  const double rho_lo = std::ldexp(mp.chi.lo, -mp.ell);
  const double rho_hi = std::ldexp(mp.chi.hi, -mp.ell);
  if (!(rho_lo > 0.0))
    throw config_error("plancherel_kernel_norm: chi support must lie in (0, inf)");
  const double F_hi = mp.F.hi;
  if (mp.F.lo < 0.0)
    throw config_error("plancherel_kernel_norm: F support must lie in [0, inf)");

  double total = 0.0;
  for (const auto& nd : nodes) {
    BlockParams bp{nd.dec.b, nd.dec.r, 0};
    double Fmax_over_rho = F_hi / rho_lo;
    auto members = enumerate_lattice(bp, 0.0, Fmax_over_rho);
    auto s_nodes = radical_measure_nodes(nd.dec.r0, F_hi, quad.s_points);

    double node_sum = 0.0;
    for (const auto& [s, ws] : s_nodes) {
      double member_sum = 0.0;
      for (const LatticePoint& k : members) {
        const double lam = eigenvalue(k, bp);
        double W = 1.0;
        for (int n = 0; n < bp.n_blocks(); ++n)
          W *= std::pow(bp.b[n], bp.r[n]) *
               binomial(k.k[n] + bp.r[n] - 1, k.k[n]);
        // radial window where s + rho*lam lies in supp F
        double a = std::max(rho_lo, (mp.F.lo - s) / lam);
        double b = std::min(rho_hi, (F_hi - s) / lam);
        if (!(a < b)) continue;
        const int m = quad.radial_points;
        const double dr = (b - a) / m;
        double integral = 0.0;
        for (int i = 0; i < m; ++i) {
          double rho = a + (i + 0.5) * dr;
          double Fv = mp.F(s + rho * lam);
          double Cv = mp.chi(std::ldexp(rho, mp.ell));
          integral += Fv * Fv * Cv * Cv *
                      std::pow(rho, double(spec.d2 - 1 + rsum));
        }
        member_sum += W * integral * dr;
      }
      node_sum += ws * member_sum;
    }
    total += nd.node.weight * node_sum;
  }
  return std::sqrt(prefactor * total);
}

int ell0_threshold(const GroupSpec& spec, double A_lo, double A_hi,
                   double chi_lo, double chi_hi, const QuadConfig& quad) {
  if (!(0.0 < A_lo && A_lo < A_hi))
    throw config_error("ell0_threshold: A must be a compact subset of (0, inf)");
  if (!(0.0 < chi_lo && chi_lo < chi_hi))
    throw config_error("ell0_threshold: chi support must be compact in (0, inf)");
  auto nodes = decompose_on_sphere(spec, quad);
  double m_star = std::numeric_limits<double>::infinity();
  for (const auto& nd : nodes) {
    double s = 0.0;
    for (std::size_t n = 0; n < nd.dec.b.size(); ++n)
      s += nd.dec.r[n] * nd.dec.b[n];
    m_star = std::min(m_star, s);
  }
  if (m_star < 1e-10)
    throw numeric_error("ell0_threshold: min_omega sum r_n b_n below 1e-10 "
                        "(second layer is degenerate)");
  int ell0 = -64;
  while (!(std::ldexp(chi_lo * m_star, ell0 + 1) > A_hi)) {
    ++ell0;
    if (ell0 > 64) throw numeric_error("ell0_threshold: no finite threshold");
  }
  return ell0;
}

cd conv_kernel_eval(const GroupSpec& spec, const MultiplierPair& mp,
                    const Vector& x, const Vector& u, const QuadConfig& quad) {
  if (x.size() != spec.d1 || u.size() != spec.d2)
    throw config_error("conv_kernel_eval: point dimension mismatch");
  auto nodes = decompose_on_sphere(spec, quad);
  const auto& sig = nodes[0].dec;
  const int r0 = sig.r0;
  if (r0 > 3)
    throw config_error("conv_kernel_eval: radical dimension > 3 unsupported");

  const double rho_lo = std::ldexp(mp.chi.lo, -mp.ell);
  const double rho_hi = std::ldexp(mp.chi.hi, -mp.ell);
  const double F_hi = mp.F.hi;
  const double prefactor = std::pow(2.0 * pi, -double(r0 + spec.d2));

  // radial Fourier kernel of the tau-integral over R^{r0}
  auto tau_factor = [&](double lam, double v) -> double {
    if (r0 == 0) return mp.F(lam);
    if (lam >= F_hi) return 0.0;
    const double t_max = std::sqrt(F_hi - lam);
    const int m = quad.tau_points;
    const double dt = t_max / m;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      double t = (i + 0.5) * dt;
      double Fv = mp.F(lam + t * t);
      if (Fv == 0.0) continue;
      double kernel;
      if (r0 == 1) kernel = 2.0 * std::cos(t * v);
      else if (r0 == 2) kernel = 2.0 * pi * std::cyl_bessel_j(0, t * v) * t;
      else {
        double tv = t * v;
        double sinc = std::abs(tv) < 1e-8 ? 1.0 : std::sin(tv) / tv;
        kernel = 4.0 * pi * sinc * t * t;
      }
      acc += Fv * kernel;
    }
    return acc * dt;
  };

  cd total = 0.0;
  for (const auto& nd : nodes) {
    BlockParams bp{nd.dec.b, nd.dec.r, 0};
    auto members = enumerate_lattice(bp, 0.0, F_hi / rho_lo);
    // rotation-invariant block radii |P_n x|
    std::vector<double> blk2(nd.dec.b.size());
    for (std::size_t n = 0; n < blk2.size(); ++n)
      blk2[n] = (nd.dec.projections[n + 1] * x).squaredNorm();
    const double rad = (nd.dec.projections[0] * x).norm();
    const double mu_u = nd.node.omega.dot(u);

    const int m = quad.radial_points;
    const double dr = (rho_hi - rho_lo) / m;
    cd node_sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const double rho = rho_lo + (i + 0.5) * dr;
      const double chv = mp.chi(std::ldexp(rho, mp.ell));
      if (chv == 0.0) continue;
      double ksum = 0.0;
      for (const LatticePoint& k : members) {
        const double lam = rho * eigenvalue(k, bp);
        if (lam >= F_hi) continue;
        double tf = tau_factor(lam, rad);
        if (tf == 0.0) continue;
        double amp = 1.0;
        for (int n = 0; n < bp.n_blocks(); ++n)
          amp *= phi_radial(k.k[n], rho * bp.b[n], bp.r[n], blk2[n]);
        ksum += tf * amp;
      }
      const double phase = rho * mu_u;
      node_sum += ksum * chv * std::pow(rho, double(spec.d2 - 1)) *
                  cd(std::cos(phase), std::sin(phase));
    }
    total += nd.node.weight * node_sum * dr;
  }
  return prefactor * total;
}

}  // namespace subspec
