#pragma once

// Internal: experiment definitions shared by the scan runner and the C API.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "altspin/config.hpp"

namespace altspin::detail {

struct Schema {
  std::vector<std::string> axes;   // allowed grid axes
  std::vector<std::string> inner;  // axes evaluated together inside one job
  // Allowed keys with defaults; an empty default marks the key as required
  // (unless it is a grid axis).
  std::map<std::string, std::string> fixed;
  std::map<std::string, std::string> options;
  int max_sites = 16;
};

const Schema& schema_for(const std::string& experiment);

struct GridPoint {
  std::vector<std::string> coords;   // formatted coordinate cells
  std::map<std::string, double> at;  // axis name -> value
  std::string label;                 // entropy_bands set name
};

struct Job {
  std::vector<std::size_t> rows;
};

struct RowResult {
  std::vector<std::string> cells;  // one per value column
  std::string error;               // non-empty marks the row failed
};

class Experiment {
 public:
  explicit Experiment(const ScanConfig& cfg);
  virtual ~Experiment() = default;

  const ScanConfig& config() const noexcept { return cfg_; }
  const std::vector<GridPoint>& points() const noexcept { return points_; }
  const std::vector<Job>& jobs() const noexcept { return jobs_; }

  virtual std::vector<std::string> coordinate_columns() const;
  virtual std::vector<std::string> value_columns() const = 0;

  // Results for job.rows in order. An exception fails every row of the job.
  virtual std::vector<RowResult> run(const Job& job) const = 0;

  // Scalar digests of the finished table (rows hold value cells only,
  // indexed like points()).
  virtual std::vector<std::pair<std::string, double>> summarize(
      const std::vector<std::vector<std::string>>& values) const;

 protected:
  // Cartesian grid over the configured axes, jobs grouped by the non-inner axes.
  void layout_cartesian();

  double value(const GridPoint& p, const std::string& key) const;  // axis, then [fixed]
  double option(const std::string& key) const;
  std::string option_text(const std::string& key) const;
  int column(const std::string& name) const;

  ScanConfig cfg_;
  const Schema& schema_;
  std::vector<GridPoint> points_;
  std::vector<Job> jobs_;
};

std::unique_ptr<Experiment> make_experiment(const ScanConfig& resolved);

std::string cell(double v);
std::string cell(std::optional<double> v);
std::string cell_int(long long v);

}  // namespace altspin::detail
