#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace altspin {

// One grid axis, either min/max/step or an explicit value list.
struct AxisSpec {
  std::string name;
  std::vector<double> values;
  // Echo of how the axis was written, for the manifest.
  std::string source;
};

// Flat key = value text. Top-level keys: experiment, n, seed, workers,
// output. Sections: [fixed] and [options] hold scalars or comma lists,
// [axis.<name>] holds min/max/step or values. '#' starts a comment.
struct ScanConfig {
  std::string experiment;
  int n = 12;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output;
  std::vector<AxisSpec> axes;  // declaration order; first axis varies slowest
  std::map<std::string, std::string> fixed;
  std::map<std::string, std::string> options;

  const AxisSpec* axis(const std::string& name) const;
  std::size_t grid_size() const;
};

ScanConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ScanConfig load_config(const std::string& path);

// Canonical text form; parse_config(to_text(c)) reproduces c. Without the
// runtime keys (workers, output) it identifies the scan itself.
std::string to_text(const ScanConfig& cfg, bool runtime_keys = true);

// Evenly spaced axis with both ends included when they land on the grid.
std::vector<double> axis_range(double min, double max, double step);

double parse_real(const std::string& text, const std::string& what);
long long parse_integer(const std::string& text, const std::string& what);
std::vector<double> parse_real_list(const std::string& text, const std::string& what);

std::string format_real(double v);  // %.12g

}  // namespace altspin
