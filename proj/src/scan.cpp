#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "altspin/error.hpp"
#include "altspin/experiments.hpp"
#include "experiment_impl.hpp"

namespace altspin {

namespace {

namespace fs = std::filesystem;
using detail::Experiment;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_field(cells[i]);
  }
  return out;
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot write '" + tmp + "'");
    out << text;
    if (!out.flush()) throw_io("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw_io("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

ScanConfig resolve_config(ScanConfig cfg, const RunOptions& opt) {
  if (opt.experiment) cfg.experiment = *opt.experiment;
  if (opt.n) cfg.n = *opt.n;
  if (opt.workers) cfg.workers = *opt.workers;
  if (opt.out) cfg.output = *opt.out;
  if (opt.seed) cfg.seed = *opt.seed;

  if (cfg.experiment.empty()) throw_config("no experiment given");
  const auto& schema = detail::schema_for(cfg.experiment);
  if (cfg.workers < 1) throw_config("workers must be >= 1");
  const bool n_axis = cfg.axis("n") != nullptr;
  if (!n_axis && (cfg.n < 2 || cfg.n % 2 != 0 || cfg.n > schema.max_sites)) {
    throw_config(cfg.experiment + " needs an even n within [2, " + std::to_string(schema.max_sites) + "], got " +
                 std::to_string(cfg.n));
  }
  for (const auto& a : cfg.axes) {
    if (!contains(schema.axes, a.name)) throw_config(cfg.experiment + " has no axis '" + a.name + "'");
    if (cfg.fixed.count(a.name)) throw_config("'" + a.name + "' is both an axis and a [fixed] value");
  }
  for (const auto& [key, v] : cfg.fixed) {
    if (!schema.fixed.count(key)) throw_config(cfg.experiment + " has no [fixed] key '" + key + "'");
    parse_real(v, "[fixed] " + key);
  }
  for (const auto& [key, v] : cfg.options) {
    if (!schema.options.count(key)) throw_config(cfg.experiment + " has no [options] key '" + key + "'");
  }
  for (const auto& [key, def] : schema.fixed) {
    if (def.empty() && !cfg.fixed.count(key) && !cfg.axis(key)) {
      throw_config(cfg.experiment + " needs '" + key + "' as a [fixed] value or an axis");
    }
  }
  return cfg;
}

std::vector<std::string> result_columns(const ScanConfig& cfg) {
  const auto e = detail::make_experiment(cfg);
  auto cols = e->coordinate_columns();
  for (auto& c : e->value_columns()) cols.push_back(c);
  cols.emplace_back("status");
  cols.emplace_back("message");
  return cols;
}

RunSummary run_scan(const ScanConfig& raw, const RunOptions& opt) {
  const ScanConfig cfg = resolve_config(raw, opt);
  if (cfg.output.empty()) throw_config("no output path (set 'output' or --out)");
  auto log = [&](const std::string& s) {
    if (opt.log) opt.log(s);
  };

  const std::string started = utc_now();
  const auto exp = detail::make_experiment(cfg);
  const auto& points = exp->points();
  const auto& jobs = exp->jobs();
  const auto coord_cols = exp->coordinate_columns();
  const auto value_cols = exp->value_columns();
  const std::size_t width = coord_cols.size() + value_cols.size() + 2;

  const std::string scan_text = to_text(cfg, false);
  char fp[17];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(fnv1a(std::string(kVersion) + scan_text)));
  if (const auto parent = fs::path(cfg.output).parent_path(); !parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw_io("cannot create directory '" + parent.string() + "': " + ec.message());
  }
  const std::string partial_path = cfg.output + ".partial";
  const std::string partial_header = std::string("#partial ") + fp;

  std::vector<std::optional<std::vector<std::string>>> rows(points.size());
  RunSummary summary;
  if (opt.resume && fs::exists(partial_path)) {
    std::ifstream in(partial_path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line) || line != partial_header) {
      throw_config("checkpoint '" + partial_path + "' belongs to a different scan");
    }
    // Only newline-terminated lines count; a torn tail is recomputed.
    const auto complete = text.rfind('\n');
    std::size_t consumed = line.size() + 1;
    while (std::getline(lines, line)) {
      consumed += line.size() + 1;
      if (consumed > complete + 1) break;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      char* end = nullptr;
      const auto idx = std::strtoull(line.c_str(), &end, 10);
      if (end != line.c_str() + tab || idx >= rows.size()) continue;
      auto cells = split_csv(line.substr(tab + 1));
      if (cells.size() != width) continue;
      rows[idx] = std::move(cells);
    }
  }

  std::vector<std::size_t> todo;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const bool done = std::all_of(jobs[j].rows.begin(), jobs[j].rows.end(), [&](auto r) { return rows[r].has_value(); });
    if (done) {
      summary.resumed_rows += jobs[j].rows.size();
    } else {
      for (const auto r : jobs[j].rows) rows[r].reset();
      todo.push_back(j);
    }
  }

  // Fresh checkpoint holding exactly the rows kept from the old one.
  std::ofstream sink(partial_path, std::ios::binary | std::ios::trunc);
  if (!sink) throw_io("cannot write checkpoint '" + partial_path + "'");
  sink << partial_header << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]) sink << i << '\t' << join_row(*rows[i]) << '\n';
  }
  sink.flush();
  if (summary.resumed_rows) log("resumed " + std::to_string(summary.resumed_rows) + " rows from checkpoint");

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::size_t finished = 0;
  const auto t0 = std::chrono::steady_clock::now();
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < todo.size();) {
      const auto& job = jobs[todo[k]];
      std::vector<detail::RowResult> results;
      std::string failure;
      try {
        results = exp->run(job);
        if (results.size() != job.rows.size()) failure = "internal: row count mismatch";
      } catch (const std::exception& e) {
        failure = e.what();
      }
      std::vector<std::vector<std::string>> formatted;
      for (std::size_t i = 0; i < job.rows.size(); ++i) {
        std::vector<std::string> cells = points[job.rows[i]].coords;
        const std::string err = failure.empty() ? results[i].error : failure;
        if (err.empty()) {
          cells.insert(cells.end(), results[i].cells.begin(), results[i].cells.end());
          cells.emplace_back("ok");
        } else {
          cells.resize(cells.size() + value_cols.size());
          cells.emplace_back("error");
        }
        cells.push_back(err);
        formatted.push_back(std::move(cells));
      }
      std::lock_guard lock(mu);
      std::string block;
      for (std::size_t i = 0; i < job.rows.size(); ++i) {
        block += std::to_string(job.rows[i]) + '\t' + join_row(formatted[i]) + '\n';
        rows[job.rows[i]] = std::move(formatted[i]);
      }
      sink << block;
      sink.flush();
      ++finished;
      if (opt.log && (finished == todo.size() || finished % std::max<std::size_t>(1, todo.size() / 20) == 0)) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu/%zu jobs, %.1f s", finished, todo.size(), secs);
        opt.log(buf);
      }
    }
  };
  const auto threads = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), todo.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  sink.close();

  // Final table in grid order.
  std::vector<std::vector<std::string>> values(points.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = *rows[i];
    if (r[width - 2] == "error") ++summary.errors;
    values[i].assign(r.begin() + static_cast<std::ptrdiff_t>(coord_cols.size()),
                     r.begin() + static_cast<std::ptrdiff_t>(coord_cols.size() + value_cols.size()));
  }
  summary.summary = exp->summarize(values);
  summary.rows = rows.size();

  const std::string finished_at = utc_now();
  std::ostringstream csv;
  csv << "# altspin " << kVersion << "\n";
  csv << "# experiment: " << cfg.experiment << "\n";
  csv << "# n: " << cfg.n << "\n";
  csv << "# seed: " << cfg.seed << "\n";
  csv << "# rows: " << rows.size() << "\n";
  {
    std::istringstream lines(scan_text);
    for (std::string line; std::getline(lines, line);) csv << "# config: " << line << "\n";
  }
  csv << "# started: " << started << "\n";
  csv << "# finished: " << finished_at << "\n";
  std::vector<std::string> header = coord_cols;
  header.insert(header.end(), value_cols.begin(), value_cols.end());
  header.emplace_back("status");
  header.emplace_back("message");
  csv << join_row(header) << "\n";
  for (const auto& r : rows) csv << join_row(*r) << "\n";
  write_atomically(cfg.output, csv.str());

  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["experiment"] = cfg.experiment;
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["csv"] = fs::path(cfg.output).filename().string();
  j["rows"] = summary.rows;
  j["errors"] = summary.errors;
  j["resumed_rows"] = summary.resumed_rows;
  j["columns"] = header;
  j["axes"] = nlohmann::ordered_json::object();
  for (const auto& a : cfg.axes) j["axes"][a.name] = a.values;
  j["fixed"] = cfg.fixed;
  j["options"] = cfg.options;
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary.summary) j["summary"][k] = v;
  j["started"] = started;
  j["finished"] = finished_at;
  summary.csv_path = cfg.output;
  summary.json_path = cfg.output + ".json";
  write_atomically(summary.json_path, j.dump(2) + "\n");

  std::error_code ec;
  fs::remove(partial_path, ec);
  return summary;
}

// ---------------------------------------------------------------------------

ValidationReport validate_result(const std::string& csv_path) {
  ValidationReport rep;
  auto problem = [&](const std::string& s) {
    rep.ok = false;
    if (rep.problems.size() < 200) rep.problems.push_back(s);
  };
  std::ifstream in(csv_path);
  if (!in) throw_io("cannot open '" + csv_path + "'");

  std::map<std::string, std::string> manifest;
  std::string line;
  std::vector<std::string> header;
  bool tagged = false;
  while (std::getline(in, line)) {
    if (line.rfind("# altspin ", 0) == 0) tagged = true;
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon != std::string::npos) manifest.emplace(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    header = split_csv(line);
    break;
  }
  if (!tagged) problem("missing '# altspin' manifest line");
  if (header.size() < 2 || header[header.size() - 2] != "status" || header.back() != "message") {
    problem("header must end with status,message");
    return rep;
  }
  int n = 0;
  try {
    n = static_cast<int>(parse_integer(manifest.at("n"), "n"));
  } catch (...) {
    problem("manifest lacks a valid 'n'");
  }
  std::size_t expected = 0;
  try {
    expected = static_cast<std::size_t>(parse_integer(manifest.at("rows"), "rows"));
  } catch (...) {
    problem("manifest lacks a valid 'rows'");
  }

  struct Range {
    double lo, hi;
    bool integer;
    bool optional;  // may be empty on an ok row
  };
  const double half_n = n / 2.0;
  const std::map<std::string, Range> ranges = {
      {"lambda", {-1e300, 1e300, false, false}},
      {"delta", {-1e300, 1e300, false, false}},
      {"b", {-1e300, 1e300, false, false}},
      {"t", {0, 1e300, false, false}},
      {"n", {2, 16, true, false}},
      {"e0", {-1e300, 1e300, false, false}},
      {"e1", {-1e300, 1e300, false, false}},
      {"gap", {0, 1e300, false, false}},
      {"degeneracy", {1, 1e9, true, false}},
      {"gapless", {0, 1, true, false}},
      {"ground_mz", {-half_n, half_n, true, true}},
      {"mz_display", {-2, static_cast<double>(n), true, false}},
      {"k", {0, n / 4.0, true, true}},
      {"p", {-1, 1, true, true}},
      {"z", {-1, 1, true, false}},
      {"czz_12", {-1, 1, false, false}},
      {"czz_23", {-1, 1, false, false}},
      {"e_ln_12", {0, 1, false, false}},
      {"e_ln_23", {0, 1, false, false}},
      {"ggm", {0, 0.5, false, true}},
      {"echo", {0, 1, false, false}},
      {"min_echo", {0, 1, false, false}},
      {"t_star", {0, 1e300, false, true}},
      {"t_kink", {0, 1e300, false, true}},
      {"critical_count", {0, 1e9, true, false}},
      {"kink_count", {0, 1e9, true, false}},
      {"half_entropy", {0, half_n, false, false}},
      {"beta_max_12", {0, 100, false, true}},
      {"beta_max_23", {0, 100, false, true}},
      {"e_ln_max_12", {0, 1, false, false}},
      {"e_ln_max_23", {0, 1, false, false}},
      {"interior_12", {0, 1, true, true}},
      {"interior_23", {0, 1, true, true}},
      {"max_deviation", {0, 1e300, false, false}},
      {"b_dependence", {0, 1e300, false, false}},
      {"rhs_max", {0, 1e300, false, false}},
  };
  constexpr double kSlack = 1e-9;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rep.rows;
    const auto cells = split_csv(line);
    const std::string where = "row " + std::to_string(rep.rows);
    if (cells.size() != header.size()) {
      problem(where + ": " + std::to_string(cells.size()) + " fields, expected " + std::to_string(header.size()));
      continue;
    }
    const std::string& status = cells[cells.size() - 2];
    const std::string& message = cells.back();
    if (status == "error") {
      if (message.empty()) problem(where + ": error row without message");
      continue;
    }
    if (status != "ok") {
      problem(where + ": bad status '" + status + "'");
      continue;
    }
    if (!message.empty()) problem(where + ": ok row carries a message");
    for (std::size_t c = 0; c + 2 < cells.size(); ++c) {
      const auto it = ranges.find(header[c]);
      if (it == ranges.end()) continue;
      const Range& r = it->second;
      if (cells[c].empty()) {
        if (!r.optional) problem(where + ": empty " + header[c]);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (end != cells[c].c_str() + cells[c].size() || !std::isfinite(v)) {
        problem(where + ": " + header[c] + " is not a number");
      } else if (v < r.lo - kSlack || v > r.hi + kSlack) {
        problem(where + ": " + header[c] + " = " + cells[c] + " out of range");
      } else if (r.integer && v != std::round(v)) {
        problem(where + ": " + header[c] + " must be an integer");
      }
    }
    const auto e0 = std::find(header.begin(), header.end(), "e0");
    const auto e1 = std::find(header.begin(), header.end(), "e1");
    if (e0 != header.end() && e1 != header.end()) {
      const double lo = std::strtod(cells[static_cast<std::size_t>(e0 - header.begin())].c_str(), nullptr);
      const double hi = std::strtod(cells[static_cast<std::size_t>(e1 - header.begin())].c_str(), nullptr);
      if (hi < lo - kSlack) problem(where + ": e1 below e0");
    }
  }
  if (rep.rows != expected) {
    problem("row count " + std::to_string(rep.rows) + " differs from manifest " + std::to_string(expected));
  }
  return rep;
}

}  // namespace altspin
