#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "subspec/experiment.hpp"

namespace subspec {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvData read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read " + path.string());
  CsvData data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (data.header.empty())
      data.header = split_csv_line(line);
    else
      data.rows.push_back(split_csv_line(line));
  }
  return data;
}

int column_index(const CsvData& d, const std::string& name) {
  for (std::size_t i = 0; i < d.header.size(); ++i)
    if (d.header[i] == name) return int(i);
  return -1;
}

// minimal log-log / lin-log polyline plot
void write_svg_plot(const fs::path& path, const std::string& title,
                    const std::vector<std::pair<double, double>>& pts,
                    bool log_x, bool log_y) {
  if (pts.size() < 2) return;
  auto tx = [&](double x) { return log_x ? std::log10(std::max(x, 1e-300)) : x; };
  auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& [x, y] : pts) {
    xmin = std::min(xmin, tx(x));
    xmax = std::max(xmax, tx(x));
    ymin = std::min(ymin, ty(y));
    ymax = std::max(ymax, ty(y));
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  const double W = 640, H = 420, m = 50;
  std::ofstream out(path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
      << "' height='" << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' "
         "font-family='monospace' font-size='13'>" << title << "</text>\n";
  out << "<rect x='" << m << "' y='" << m << "' width='" << W - 2 * m
      << "' height='" << H - 2 * m << "' fill='none' stroke='black'/>\n";
  out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
  for (auto& [x, y] : pts) {
    double px = m + (tx(x) - xmin) / (xmax - xmin) * (W - 2 * m);
    double py = H - m - (ty(y) - ymin) / (ymax - ymin) * (H - 2 * m);
    out << px << "," << py << " ";
  }
  out << "'/>\n";
  for (auto& [x, y] : pts) {
    double px = m + (tx(x) - xmin) / (xmax - xmin) * (W - 2 * m);
    double py = H - m - (ty(y) - ymin) / (ymax - ymin) * (H - 2 * m);
    out << "<circle cx='" << px << "' cy='" << py
        << "' r='2.5' fill='steelblue'/>\n";
  }
  out << "</svg>\n";
}

}  // namespace

BundleSummary report_bundle(const std::string& output_dir) {
  fs::path dir(output_dir);
  if (!fs::is_directory(dir))
    throw config_error("report: not a directory: " + output_dir);

  // newest file wins for duplicated base names
  std::map<std::string, fs::path> verdict_files;
  std::vector<std::string> warnings;
  bool any_csv = false;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() != ".csv") continue;
    any_csv = true;
    std::string name = p.filename().string();
    if (name.size() < 13 ||
        name.substr(name.size() - 13) != "_verdicts.csv")
      continue;
    auto it = verdict_files.find(name);
    if (it == verdict_files.end()) {
      verdict_files[name] = p;
    } else {
      bool newer = fs::last_write_time(p) > fs::last_write_time(it->second);
      warnings.push_back("duplicate verdict file '" + name + "': keeping " +
                         (newer ? p : it->second).string());
      if (newer) it->second = p;
    }
  }
  if (!any_csv)
    throw config_error("report: no experiment CSV files under " + output_dir);

  BundleSummary sum;
  std::ostringstream text;
  std::vector<std::string> failing;
  for (const auto& [name, path] : verdict_files) {
    CsvData data = read_csv(path);
    int ci = column_index(data, "criterion");
    int oi = column_index(data, "observed");
    int ei = column_index(data, "expected");
    int pi = column_index(data, "pass");
    if (ci < 0 || pi < 0) continue;
    for (const auto& row : data.rows) {
      ++sum.criteria_total;
      bool pass = row[std::size_t(pi)] == "1";
      if (pass)
        ++sum.criteria_passed;
      else
        failing.push_back(row[std::size_t(ci)] + ": observed " +
                          (oi >= 0 ? row[std::size_t(oi)] : "?") +
                          ", expected " + (ei >= 0 ? row[std::size_t(ei)] : "?") +
                          "  [" + name + "]");
    }
  }

  text << sum.criteria_passed << "/" << sum.criteria_total
       << " criteria pass\n";
  for (const std::string& f : failing) text << "FAIL " << f << "\n";
  for (const std::string& w : warnings) text << "WARNING " << w << "\n";

  // plots from the scan CSVs
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.filename() == "cluster-scan.csv") {
      CsvData d = read_csv(p);
      int ki = column_index(d, "K"), ni = column_index(d, "norm_exact_1to2");
      int li = column_index(d, "norm_lower_p");
      std::vector<std::pair<double, double>> pts;
      for (const auto& row : d.rows) {
        double K = std::stod(row[std::size_t(ki)]);
        std::string cell = li >= 0 && !row[std::size_t(li)].empty()
                               ? row[std::size_t(li)]
                               : row[std::size_t(ni)];
        double v = std::stod(cell);
        if (v > 0.0) pts.push_back({K + 1.0, v});
      }
      write_svg_plot(p.parent_path() / "cluster-scan.svg",
                     "cluster norm vs K+1 (log-log)", pts, true, true);
      text << "plot: " << (p.parent_path() / "cluster-scan.svg").string()
           << "\n";
    } else if (p.filename() == "restriction-scan.csv") {
      CsvData d = read_csv(p);
      int ei = column_index(d, "ell"), ni = column_index(d, "kernel_l2_norm");
      std::vector<std::pair<double, double>> pts;
      for (const auto& row : d.rows)
        pts.push_back({std::stod(row[std::size_t(ei)]),
                       std::stod(row[std::size_t(ni)])});
      write_svg_plot(p.parent_path() / "restriction-scan.svg",
                     "kernel L2 norm vs ell (log y)", pts, false, true);
      text << "plot: " << (p.parent_path() / "restriction-scan.svg").string()
           << "\n";
    }
  }

  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  text << "generated_at: " << t << "\n";

  sum.text = text.str();
  std::ofstream out(dir / "summary.txt");
  out << sum.text;
  return sum;
}

}  // namespace subspec
