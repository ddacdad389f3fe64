// Command-line driver: subspec <experiment> --config path.json [--seed N]
// [--out dir]. Exit codes: 0 all criteria pass, 1 criterion failure,
// 2 configuration error, 3 numerical abort.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "subspec/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for sub-Laplacians on two-step groups"};
  std::string experiment, config_path, out_dir;
  std::uint64_t seed = 0;
  bool has_seed = false;

  app.add_option("experiment", experiment,
                 "validate | decompose | spectrum | cluster-scan | "
                 "heat-check | restriction-scan | report")
      ->required();
  app.add_option("--config", config_path, "JSON experiment config");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed override");
  app.add_option("--out", out_dir, "output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }
  has_seed = seed_opt->count() > 0;

  try {
    std::string config_text = "{}";
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw subspec::config_error("cannot read config: " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      config_text = ss.str();
    }
    subspec::ExperimentConfig cfg = subspec::parse_config(
        config_text, experiment, seed, has_seed, out_dir);
    subspec::ExperimentReport rep = subspec::run(cfg);
    for (const subspec::Verdict& v : rep.verdicts)
      std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.criterion
                << " observed=" << subspec::fmt_g17(v.observed)
                << " expected=" << subspec::fmt_g17(v.expected)
                << " tol=" << subspec::fmt_g17(v.tolerance) << "\n";
    if (cfg.experiment == "report")
      std::cout << "summary written under " << cfg.output_dir << "\n";
    return rep.exit_code;
  } catch (const subspec::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const subspec::numeric_error& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
