#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "subspec/common.hpp"

namespace subspec {

struct ExperimentConfig {
  std::string experiment;
  std::string group;        // preset name, or empty when inline_group set
  std::string inline_group; // JSON text of an inline GroupSpec
  std::uint64_t seed = 42;
  std::string output_dir = ".";
  std::string raw_canonical;  // canonical JSON (sorted keys) for hashing
  std::map<std::string, double> num_params;
  std::map<std::string, std::string> str_params;
  std::map<std::string, std::vector<double>> vec_params;

  double num(const std::string& key, double fallback) const {
    auto it = num_params.find(key);
    return it == num_params.end() ? fallback : it->second;
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = str_params.find(key);
    return it == str_params.end() ? fallback : it->second;
  }
  std::vector<double> vec(const std::string& key,
                          const std::vector<double>& fallback) const {
    auto it = vec_params.find(key);
    return it == vec_params.end() ? fallback : it->second;
  }
};

struct Verdict {
  std::string criterion;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::vector<std::string> csv_files;
  std::vector<Verdict> verdicts;
  std::string config_hash;
  int exit_code = 0;  // 0 pass, 1 verdict failure
};

// Parses the JSON config; the experiment positional (from the CLI) must
// agree with the config's "experiment" when both are present.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& experiment_override,
                              std::uint64_t seed_override, bool has_seed,
                              const std::string& out_override);

std::string config_hash(const ExperimentConfig& cfg);

ExperimentReport run(const ExperimentConfig& cfg);

struct BundleSummary {
  std::string text;
  int criteria_total = 0;
  int criteria_passed = 0;
};

// Aggregates every *_verdicts.csv under the directory into summary.txt and
// emits simple SVG plots of the scan CSVs.
BundleSummary report_bundle(const std::string& output_dir);

// fixed float formatting used by every CSV writer (round-trip safe)
std::string fmt_g17(double v);

int max_threads();  // TOOL_THREADS env, default 1

}  // namespace subspec
