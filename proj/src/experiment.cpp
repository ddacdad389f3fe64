#include "subspec/experiment.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "subspec/cluster.hpp"
#include "subspec/grid.hpp"
#include "subspec/group.hpp"
#include "subspec/heat.hpp"
#include "subspec/laguerre.hpp"
#include "subspec/restriction.hpp"
#include "subspec/symplectic.hpp"
#include "subspec/twisted.hpp"

namespace subspec {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int max_threads() {
  const char* env = std::getenv("TOOL_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& experiment_override,
                              std::uint64_t seed_override, bool has_seed,
                              const std::string& out_override) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.experiment = j.value("experiment", "");
  if (!experiment_override.empty()) {
    if (!cfg.experiment.empty() && cfg.experiment != experiment_override)
      throw config_error("experiment mismatch: config says '" + cfg.experiment +
                         "', command line says '" + experiment_override + "'");
    cfg.experiment = experiment_override;
  }
  if (cfg.experiment.empty())
    throw config_error("no experiment given (config or command line)");

  if (j.contains("group")) {
    if (j["group"].is_string())
      cfg.group = j["group"].get<std::string>();
    else
      cfg.inline_group = j["group"].dump();
  }
  cfg.seed = j.value("seed", std::uint64_t(42));
  if (has_seed) cfg.seed = seed_override;
  cfg.output_dir = j.value("output", std::string("."));
  if (!out_override.empty()) cfg.output_dir = out_override;

  if (j.contains("parameters")) {
    if (!j["parameters"].is_object())
      throw config_error("config: parameters must be an object");
    for (auto& [key, val] : j["parameters"].items()) {
      if (val.is_number()) {
        double d = val.get<double>();
        if (key.find("tol") != std::string::npos && d <= 0.0)
          throw config_error("config: tolerance '" + key + "' must be positive");
        cfg.num_params[key] = d;
      } else if (val.is_string()) {
        cfg.str_params[key] = val.get<std::string>();
      } else if (val.is_array()) {
        std::vector<double> v;
        for (auto& e : val) v.push_back(e.get<double>());
        cfg.vec_params[key] = v;
      } else if (val.is_boolean()) {
        cfg.num_params[key] = val.get<bool>() ? 1.0 : 0.0;
      } else {
        throw config_error("config: unsupported parameter type for '" + key + "'");
      }
    }
  }

  // canonical form of the effective config (nlohmann orders keys)
  json canon = j;
  canon["experiment"] = cfg.experiment;
  canon["seed"] = cfg.seed;
  canon.erase("output");
  cfg.raw_canonical = canon.dump();
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : cfg.raw_canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

namespace {

class Csv {
 public:
  Csv(const fs::path& path, const std::string& header,
      const std::string& hash) {
    out_.open(path);
    if (!out_) throw config_error("cannot open output file " + path.string());
    out_ << "# config_hash=" << hash << "\n" << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

GroupSpec resolve_group(const ExperimentConfig& cfg) {
  if (!cfg.group.empty()) return preset_by_name(cfg.group);
  if (!cfg.inline_group.empty()) return group_from_json(cfg.inline_group);
  throw config_error("experiment '" + cfg.experiment + "' needs a group");
}

BlockParams resolve_block(const ExperimentConfig& cfg) {
  if (cfg.vec_params.count("b")) {
    BlockParams p;
    p.b = cfg.vec("b", {});
    auto rv = cfg.vec("r", std::vector<double>(p.b.size(), 1.0));
    for (double r : rv) p.r.push_back(int(r));
    p.r0 = int(cfg.num("r0", 0));
    p.check(true);
    return p;
  }
  GroupSpec spec = resolve_group(cfg);
  auto muv = cfg.vec("mu", {});
  if (int(muv.size()) != spec.d2)
    throw config_error("block parameters need 'b'/'r' arrays or a group "
                       "with a 'mu' covector");
  Vector mu(spec.d2);
  for (int i = 0; i < spec.d2; ++i) mu(i) = muv[std::size_t(i)];
  MuDecomposition dec = decompose(spec, mu, cfg.num("cluster_tol", 1e-6));
  return BlockParams{dec.b, dec.r, dec.r0};
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt_g17(v[i]);
  return s;
}

void write_verdicts(const fs::path& path, const std::vector<Verdict>& vs,
                    const std::string& hash) {
  Csv csv(path, "criterion,observed,expected,tolerance,pass", hash);
  for (const Verdict& v : vs)
    csv.row({v.criterion, fmt_g17(v.observed), fmt_g17(v.expected),
             fmt_g17(v.tolerance), v.pass ? "1" : "0"});
}

// ---------------------------------------------------------------- validate

void run_validate(const ExperimentConfig& cfg, const fs::path& dir,
                  ExperimentReport& rep) {
  GroupSpec spec = resolve_group(cfg);
  ValidationReport vr = validate(spec);
  GroupClass cls = classify(spec, int(cfg.num("samples", 32)), cfg.seed);

  Csv csv(dir / "validate.csv", "check,observed,threshold,pass",
          rep.config_hash);
  csv.row({"skew_residual", fmt_g17(vr.skew_residual), fmt_g17(1e-12),
           vr.skew_residual <= 1e-12 ? "1" : "0"});
  csv.row({"stacking_rank", std::to_string(vr.stacking_rank),
           std::to_string(spec.d2), vr.stacking_rank == spec.d2 ? "1" : "0"});
  csv.row({"htype_residual", fmt_g17(cls.max_htype_residual), fmt_g17(1e-10),
           cls.max_htype_residual <= 1e-10 ? "1" : "0"});
  csv.row({"min_singular_value", fmt_g17(cls.min_singular_value), fmt_g17(1e-10),
           cls.min_singular_value >= 1e-10 ? "1" : "0"});
  csv.row({std::string("class_") + group_type_name(cls.type), "1", "1", "1"});
  rep.csv_files.push_back((dir / "validate.csv").string());

  rep.verdicts.push_back({"group-valid", vr.passed ? 1.0 : 0.0, 1.0, 0.0,
                          vr.passed});
  std::string want = cfg.str("expect_class", "");
  if (!want.empty())
    rep.verdicts.push_back({"group-class", 0.0, 0.0, 0.0,
                            want == group_type_name(cls.type)});
}

// --------------------------------------------------------------- decompose

void run_decompose(const ExperimentConfig& cfg, const fs::path& dir,
                   ExperimentReport& rep) {
  GroupSpec spec = resolve_group(cfg);
  const double tol = cfg.num("cluster_tol", 1e-6);
  const double rtol = cfg.num("residual_tol", 1e-8);
  const bool matrices = cfg.num("include_matrices", 0) != 0.0;

  std::vector<Vector> mus;
  if (cfg.vec_params.count("mu")) {
    auto muv = cfg.vec("mu", {});
    Vector mu(spec.d2);
    for (int i = 0; i < spec.d2; ++i) mu(i) = muv[std::size_t(i)];
    mus.push_back(mu);
  } else {
    int samples = int(cfg.num("mu_samples", 8));
    std::mt19937_64 rng(stream_seed(cfg.seed, 0xdecu));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < samples; ++s) {
      Vector mu(spec.d2);
      do {
        for (int i = 0; i < spec.d2; ++i) mu(i) = gauss(rng);
      } while (mu.norm() < 1e-8);
      mus.push_back(mu / mu.norm());
    }
  }

  Csv csv(dir / "decompose.csv",
          "sample,N,r0,b,r,spectral_residual,symplectic_residual,"
          "rotation_residual,projector_residual",
          rep.config_hash);
  double worst = 0.0;
  for (std::size_t s = 0; s < mus.size(); ++s) {
    MuDecomposition dec = decompose(spec, mus[s], tol);
    double m = std::max({dec.spectral_residual, dec.symplectic_residual,
                         dec.rotation_residual, dec.projector_residual});
    worst = std::max(worst, m);
    csv.row({std::to_string(s), std::to_string(dec.b.size()),
             std::to_string(dec.r0), join_doubles(dec.b), join_ints(dec.r),
             fmt_g17(dec.spectral_residual), fmt_g17(dec.symplectic_residual),
             fmt_g17(dec.rotation_residual), fmt_g17(dec.projector_residual)});
    std::ofstream js(dir / ("decompose_" + std::to_string(s) + ".json"));
    js << decomposition_to_json(dec, matrices) << "\n";
  }
  rep.csv_files.push_back((dir / "decompose.csv").string());
  rep.verdicts.push_back({"decomposition-residuals", worst, 0.0, rtol,
                          worst <= rtol});
}

// ---------------------------------------------------------------- spectrum

void run_spectrum(const ExperimentConfig& cfg, const fs::path& dir,
                  ExperimentReport& rep) {
  BlockParams p = resolve_block(cfg);
  double lo = cfg.num("lo", 0.0), hi = cfg.num("hi", 10.0);
  auto points = enumerate_lattice(p, lo, hi);
  Csv csv(dir / "spectrum.csv", "index,k,eigenvalue", rep.config_hash);
  for (std::size_t i = 0; i < points.size(); ++i)
    csv.row({std::to_string(i), join_ints(points[i].k),
             fmt_g17(eigenvalue(points[i], p))});
  rep.csv_files.push_back((dir / "spectrum.csv").string());
  rep.verdicts.push_back({"spectrum-enumerated", double(points.size()), 0.0,
                          0.0, true});
}

// ------------------------------------------------------------ cluster-scan

void run_cluster_scan(const ExperimentConfig& cfg, const fs::path& dir,
                      ExperimentReport& rep) {
  BlockParams p = resolve_block(cfg);
  const int K_min = int(cfg.num("K_min", 0));
  const int K_max = int(cfg.num("K_max", 100));
  const double pv = cfg.num("p", 1.0);
  const bool power = cfg.num("power", pv != 1.0 ? 1.0 : 0.0) != 0.0;
  const int fit_K_min = int(cfg.num("fit_K_min", K_min));
  const double d1 = p.d1();
  const double expected =
      cfg.num("expected_slope", 0.5 * d1 * (1.0 / pv - 0.5) - 0.5);
  const double slope_tol = cfg.num("slope_tol", 0.05);

  Grid grid = Grid::centered(2, int(cfg.num("grid_n", 64)),
                             cfg.num("grid_extent", 8.0));
  PowerMethodOptions opts;
  opts.restarts = int(cfg.num("restarts", 2));
  opts.seed = cfg.seed;

  Csv csv(dir / "cluster-scan.csv",
          "K,members,norm_exact_1to2,norm_lower_p,p,slope_so_far",
          rep.config_hash);
  std::vector<std::pair<int, double>> series;
  std::vector<std::pair<int, double>> power_series;
  for (int K = K_min; K <= K_max; ++K) {
    ClusterSpec cs{K, p, 0.0};
    auto members = cluster_members(cs);
    double exact = norm_1to2_exact(cs);
    double lower = 0.0;
    if (power && !members.empty())
      lower = norm_p_to_2_lower(cs, pv, grid, opts).value;
    series.push_back({K, exact});
    if (power) power_series.push_back({K, lower});
    std::string slope_cell;
    {
      std::size_t nonempty = 0;
      for (auto& [kk, v] : (power ? power_series : series))
        if (v > 0.0 && kk >= fit_K_min) ++nonempty;
      if (nonempty >= 8) {
        ExponentFit f = fit_exponent(power ? power_series : series, fit_K_min);
        slope_cell = fmt_g17(f.slope);
      }
    }
    csv.row({std::to_string(K), std::to_string(members.size()),
             fmt_g17(exact), power ? fmt_g17(lower) : "", fmt_g17(pv),
             slope_cell});
  }
  rep.csv_files.push_back((dir / "cluster-scan.csv").string());

  ExponentFit fit = fit_exponent(power ? power_series : series, fit_K_min);
  rep.verdicts.push_back({"cluster-exponent-slope", fit.slope, expected,
                          slope_tol, std::abs(fit.slope - expected) <= slope_tol});

  if (cfg.num("envelope", 0.0) != 0.0 && power) {
    const int K_ref = int(cfg.num("envelope_K_ref", 11));
    double ref = 0.0;
    for (auto& [K, v] : power_series)
      if (K == K_ref) ref = v;
    if (ref <= 0.0) throw config_error("cluster-scan: empty envelope reference");
    const double C = ref / std::pow(K_ref + 1.0, expected);
    double worst = 0.0;
    for (auto& [K, v] : power_series)
      if (v > 0.0)
        worst = std::max(worst, v / (C * std::pow(K + 1.0, expected)));
    rep.verdicts.push_back({"cluster-envelope", worst, 1.0, 0.05,
                            worst <= 1.05});
  }
}

// -------------------------------------------------------------- heat-check

void run_heat_check(const ExperimentConfig& cfg, const fs::path& dir,
                    ExperimentReport& rep) {
  BlockParams p;
  p.b = cfg.vec("b", {1.0});
  for (double r : cfg.vec("r", std::vector<double>(p.b.size(), 1.0)))
    p.r.push_back(int(r));
  p.r0 = 0;
  p.check(false);

  const double t = cfg.num("t", 0.5);
  const double trunc = cfg.num("trunc_lambda", 40.0);
  Grid grid = Grid::centered(2, int(cfg.num("grid_n", 64)),
                             cfg.num("grid_extent", 8.0));

  // Mehler kernel against the eigen-expansion sum_k e^{-t lambda_k} c phi_k
  double sup_diff = 0.0;
  if (p.d1() == 2 && p.b[0] > 0.0) {
    const double c = projection_normalization(p);
    auto members = enumerate_lattice(p, 0.0, trunc);
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) {
        double x[2] = {grid.coord(i), grid.coord(j)};
        double r2 = x[0] * x[0] + x[1] * x[1];
        cd mehler = heat_kernel(cd(t, 0.0), p, x);
        double eig = 0.0;
        for (const LatticePoint& k : members)
          eig += std::exp(-t * eigenvalue(k, p)) * c *
                 phi_radial(k.k[0], p.b[0], 1, r2);
        sup_diff = std::max(sup_diff, std::abs(mehler - cd(eig, 0.0)));
      }
    rep.verdicts.push_back({"mehler-vs-eigen", sup_diff, 0.0,
                            cfg.num("mehler_tol", 1e-8),
                            sup_diff <= cfg.num("mehler_tol", 1e-8)});
  }

  // semigroup law under twisted convolution
  if (p.d1() == 2) {
    Field f = sample_field(grid, [](const double* x) {
      return cd(std::exp(-0.25 * (x[0] * x[0] + x[1] * x[1])), 0.0);
    });
    double worst = 0.0;
    const std::pair<double, double> pairs[2] = {{0.2, 0.3}, {0.5, 0.5}};
    for (auto [t1, t2] : pairs) {
      Field two = heat_apply(heat_apply(f, cd(t1, 0.0), p), cd(t2, 0.0), p);
      Field one = heat_apply(f, cd(t1 + t2, 0.0), p);
      double num = 0.0;
      for (std::size_t i = 0; i < one.values.size(); ++i)
        num += std::norm(two.values[i] - one.values[i]);
      worst = std::max(worst, std::sqrt(num * grid.weight()) / one.norm2());
    }
    rep.verdicts.push_back({"heat-semigroup", worst, 0.0,
                            cfg.num("semigroup_tol", 1e-6),
                            worst <= cfg.num("semigroup_tol", 1e-6)});
  }

  // dispersive scan over the admissibility rectangle
  const double alpha = cfg.num("alpha", 0.5);
  DispersiveReport scan =
      dispersive_scan(p, alpha, int(cfg.num("n_samples", 64)), cfg.seed);
  Csv csv(dir / "heat-check.csv", "zeta_re,zeta_im,sup_value,bound_value",
          rep.config_hash);
  for (const auto& s : scan.samples)
    csv.row({fmt_g17(s.zeta.real()), fmt_g17(s.zeta.imag()),
             fmt_g17(s.sup_value), fmt_g17(s.bound_value)});
  rep.csv_files.push_back((dir / "heat-check.csv").string());
  rep.verdicts.push_back({"dispersive-finite", scan.max_constant, 0.0, 0.0,
                          std::isfinite(scan.max_constant) &&
                              scan.sup_at_origin_ok});

  // continuity of the constant as the frequencies degenerate to 0
  {
    BlockParams tiny = p;
    for (double& bn : tiny.b) bn *= 1e-6;
    BlockParams zero = p;
    for (double& bn : zero.b) bn = 0.0;
    DispersiveReport a = dispersive_scan(tiny, alpha, 32, cfg.seed);
    DispersiveReport b = dispersive_scan(zero, alpha, 32, cfg.seed);
    double relgap = std::abs(a.max_constant - b.max_constant) /
                    std::max(b.max_constant, 1e-300);
    rep.verdicts.push_back({"dispersive-b0-continuity", relgap, 0.0, 0.01,
                            relgap <= 0.01});
  }
}

// -------------------------------------------------------- restriction-scan

void run_restriction_scan(const ExperimentConfig& cfg, const fs::path& dir,
                          ExperimentReport& rep) {
  GroupSpec spec = resolve_group(cfg);
  MultiplierPair mp;
  mp.F = SampledFunction::indicator(cfg.num("F_lo", 1.0), cfg.num("F_hi", 4.0),
                                    int(cfg.num("F_samples", 4000)));
  mp.chi = SampledFunction::bump(cfg.num("chi_lo", 0.5), cfg.num("chi_hi", 2.0),
                                 int(cfg.num("chi_samples", 2000)));
  QuadConfig quad;
  quad.sphere_level = int(cfg.num("sphere_level", 1));
  quad.radial_points = int(cfg.num("radial_points", 32));
  quad.s_points = int(cfg.num("s_points", 48));

  const int ell_min = int(cfg.num("ell_min", 2));
  const int ell_max = int(cfg.num("ell_max", 8));
  const double d2 = spec.d2;

  Csv csv(dir / "restriction-scan.csv",
          "ell,kernel_l2_norm,predicted_scale,ratio", rep.config_hash);
  std::vector<std::pair<int, double>> norms;
  double base = 0.0;
  for (int ell = ell_min; ell <= ell_max; ++ell) {
    mp.ell = ell;
    double norm = plancherel_kernel_norm(spec, mp, quad);
    if (ell == ell_min) base = norm;
    double predicted = base * std::pow(2.0, -0.5 * d2 * (ell - ell_min));
    csv.row({std::to_string(ell), fmt_g17(norm), fmt_g17(predicted),
             fmt_g17(predicted > 0.0 ? norm / predicted : 0.0)});
    norms.push_back({ell, norm});
  }
  rep.csv_files.push_back((dir / "restriction-scan.csv").string());

  // slope of log2(norm^2) against ell
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [ell, n] : norms) {
      double x = ell, y = 2.0 * std::log2(n);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double nn = double(norms.size());
    double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    double tol = cfg.num("slope_tol", d2 >= 3 ? 0.15 : 0.1);
    rep.verdicts.push_back({"plancherel-scaling-slope", slope, -d2, tol,
                            std::abs(slope + d2) <= tol});
  }

  // self-convergence under quadrature doubling at the middle ell
  {
    mp.ell = (ell_min + ell_max) / 2;
    double n1 = plancherel_kernel_norm(spec, mp, quad);
    double n2 = plancherel_kernel_norm(spec, mp, quad.doubled());
    double rel = std::abs(n2 - n1) / n2;
    double tol = cfg.num("selfconv_tol", 0.005);
    rep.verdicts.push_back({"plancherel-self-convergence", rel, 0.0, tol,
                            rel <= tol});
  }

  if (cfg.num("check_ell0", 1.0) != 0.0) {
    int ell0 = ell0_threshold(spec, mp.F.lo, mp.F.hi, mp.chi.lo, mp.chi.hi,
                              quad);
    double expected_ell0 = cfg.num("expected_ell0", double(ell0));
    rep.verdicts.push_back({"ell0-threshold", double(ell0), expected_ell0,
                            0.0, double(ell0) == expected_ell0});
    mp.ell = -(ell0 + 1);
    double vanished = plancherel_kernel_norm(spec, mp, quad);
    mp.ell = 0;
    double at0 = plancherel_kernel_norm(spec, mp, quad);
    double ratio = at0 > 0.0 ? vanished / at0 : 0.0;
    rep.verdicts.push_back({"kernel-vanishing-below-ell0", ratio, 0.0, 1e-10,
                            ratio <= 1e-10});
  }
}

}  // namespace

ExperimentReport run(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config_hash = config_hash(cfg);
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  if (cfg.experiment == "validate")
    run_validate(cfg, dir, rep);
  else if (cfg.experiment == "decompose")
    run_decompose(cfg, dir, rep);
  else if (cfg.experiment == "spectrum")
    run_spectrum(cfg, dir, rep);
  else if (cfg.experiment == "cluster-scan")
    run_cluster_scan(cfg, dir, rep);
  else if (cfg.experiment == "heat-check")
    run_heat_check(cfg, dir, rep);
  else if (cfg.experiment == "restriction-scan")
    run_restriction_scan(cfg, dir, rep);
  else if (cfg.experiment == "report") {
    BundleSummary summary = report_bundle(cfg.output_dir);
    rep.exit_code = summary.criteria_passed == summary.criteria_total ? 0 : 1;
    return rep;
  } else
    throw config_error("unknown experiment: " + cfg.experiment);

  write_verdicts(dir / (cfg.experiment + "_verdicts.csv"), rep.verdicts,
                 rep.config_hash);
  for (const Verdict& v : rep.verdicts)
    if (!v.pass) rep.exit_code = 1;
  return rep;
}

}  // namespace subspec
