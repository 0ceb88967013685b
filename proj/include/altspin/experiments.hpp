#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "altspin/config.hpp"

namespace altspin {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& experiment_names();

// Command-line overrides; unset members keep the config value.
struct RunOptions {
  std::optional<std::string> experiment;
  std::optional<int> n;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool resume = false;
  std::function<void(const std::string&)> log;  // progress lines
};

struct RunSummary {
  std::string csv_path;
  std::string json_path;
  std::size_t rows = 0;
  std::size_t errors = 0;
  std::size_t resumed_rows = 0;  // taken from the checkpoint
  std::vector<std::pair<std::string, double>> summary;
};

// Applies the overrides, checks the config against the experiment's schema
// and returns the effective config. Unknown keys are errors.
ScanConfig resolve_config(ScanConfig cfg, const RunOptions& opt);

// Column names of the result table for a resolved config.
std::vector<std::string> result_columns(const ScanConfig& cfg);

// Runs the scan with a worker pool. Rows are appended to <out>.partial as
// jobs finish; the final CSV is written in grid order, then the sidecar
// <out>.json. With resume, completed jobs in the checkpoint are skipped.
RunSummary run_scan(const ScanConfig& cfg, const RunOptions& opt);

struct ValidationReport {
  bool ok = true;
  std::size_t rows = 0;
  std::vector<std::string> problems;
};

// Re-reads a result CSV: row count against the manifest, status/message
// consistency and per-column ranges.
ValidationReport validate_result(const std::string& csv_path);

struct OracleCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;      // worst deviation found
  double tolerance = 0.0;
  std::string detail;
};

// Brute-force cross-checks at chain length n (even, 2..10).
std::vector<OracleCheck> run_oracle(int n, std::uint64_t seed,
                                    const std::function<void(const OracleCheck&)>& progress = {});

}  // namespace altspin
