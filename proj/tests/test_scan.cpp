#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "altspin/config.hpp"
#include "altspin/error.hpp"
#include "altspin/experiments.hpp"

using namespace altspin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("altspin_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CSV without the timestamp lines.
std::string stable_body(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.rfind("# started:", 0) == 0 || line.rfind("# finished:", 0) == 0) continue;
    out += line + '\n';
  }
  return out;
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("config was accepted: " << text);
  return ErrorKind::Parameter;
}

const char* kPhaseGap = R"(# small phase-gap grid
experiment = phase_gap
n = 6

[axis.lambda]
min = -1.0
max = 0.5
step = 0.5

[axis.b]
values = 0, 0.5, 2.5

[fixed]
delta = 1.0
)";

}  // namespace

TEST_CASE("config round trip") {
  const ScanConfig cfg = parse_config(kPhaseGap);
  CHECK(cfg.experiment == "phase_gap");
  CHECK(cfg.n == 6);
  REQUIRE(cfg.axes.size() == 2);
  CHECK(cfg.axes[0].values.size() == 4);
  CHECK(cfg.axes[1].values == std::vector<double>{0.0, 0.5, 2.5});
  CHECK(cfg.grid_size() == 12);
  CHECK(cfg.fixed.at("delta") == "1.0");
  const ScanConfig again = parse_config(to_text(cfg));
  CHECK(to_text(again) == to_text(cfg));
}

TEST_CASE("axis ranges include both ends") {
  const auto v = axis_range(0.0, 1.0, 0.1);
  REQUIRE(v.size() == 11);
  CHECK(v[3] == 0.3);
  CHECK(v.back() == 1.0);
  CHECK(axis_range(-2.5, 1.0, 0.05).size() == 71);
  CHECK(axis_range(2.0, 2.0, 1.0).size() == 1);
}

TEST_CASE("malformed configs are config errors") {
  CHECK(kind_of("experiment = phase_gap\nbogus = 1\n") == ErrorKind::Config);
  CHECK(kind_of("n = 6\nn = 8\n") == ErrorKind::Config);
  CHECK(kind_of("[nonsense]\nx = 1\n") == ErrorKind::Config);
  CHECK(kind_of("[axis.lambda]\nmin = 0\nmax = 1\n") == ErrorKind::Config);
  CHECK(kind_of("[axis.lambda]\nmin = 0\nmax = 1\nstep = 0\n") == ErrorKind::Config);
  CHECK(kind_of("[axis.lambda]\nvalues = 0, 1\nmin = 0\n") == ErrorKind::Config);
  CHECK(kind_of("[axis.lambda]\nmin = 1\nmax = 0\nstep = 0.1\n") == ErrorKind::Config);
  CHECK(kind_of("[axis.lambda]\nvalues = 0, x\n") == ErrorKind::Config);
  CHECK(kind_of("n = six\n") == ErrorKind::Config);
  CHECK(kind_of("workers = 0\n") == ErrorKind::Config);
  CHECK(kind_of("just text\n") == ErrorKind::Config);
  CHECK(kind_of("[fixed]\ndelta = 1\ndelta = 2\n") == ErrorKind::Config);
}

TEST_CASE("schema checks reject unknown or conflicting keys") {
  auto resolve = [](const std::string& text) { return resolve_config(parse_config(text), {}); };
  CHECK_NOTHROW(resolve(kPhaseGap));
  CHECK_THROWS_AS(resolve("experiment = no_such_thing\n"), Error);
  CHECK_THROWS_AS(resolve(std::string(kPhaseGap) + "colour = red\n"), Error);
  CHECK_THROWS_AS(resolve(std::string(kPhaseGap) + "[options]\nnope = 1\n"), Error);
  CHECK_THROWS_AS(resolve(std::string(kPhaseGap) + "lambda = 0.2\n"), Error);  // axis and fixed
  CHECK_THROWS_AS(resolve("experiment = phase_gap\nn = 7\n"), Error);
  CHECK_THROWS_AS(resolve("experiment = beta_max\nn = 14\n"), Error);
  CHECK_THROWS_AS(resolve("experiment = dqpt_map\nn = 6\n"), Error);  // required initial point
  RunOptions opt;
  opt.n = 8;
  CHECK(resolve_config(parse_config(kPhaseGap), opt).n == 8);
}

TEST_CASE("every experiment resolves with a minimal config") {
  CHECK(experiment_names().size() == 9);
  for (const auto& name : experiment_names()) {
    std::string text = "experiment = " + name + "\nn = 6\n";
    if (name == "quench_ggm" || name == "entropy_bands") text += "[axis.t]\nvalues = 0, 1\n";
    if (name == "dqpt_map") text += "[fixed]\nlambda0 = -1\nb0 = 0.25\nlambda = 0.9\nb = 0.25\n";
    CAPTURE(name);
    CHECK_NOTHROW(resolve_config(parse_config(text), {}));
  }
}

TEST_CASE("scan writes a validated table with a manifest") {
  TempDir dir;
  RunOptions opt;
  opt.out = dir.file("gap.csv");
  const auto summary = run_scan(resolve_config(parse_config(kPhaseGap), opt), opt);
  CHECK(summary.rows == 12);
  CHECK(summary.errors == 0);
  CHECK(fs::exists(dir.file("gap.csv.json")));
  CHECK_FALSE(fs::exists(dir.file("gap.csv.partial")));

  const std::string text = slurp(dir.file("gap.csv"));
  CHECK(text.rfind("# altspin ", 0) == 0);
  CHECK(text.find("# rows: 12\n") != std::string::npos);
  CHECK(text.find("lambda,b,e0,e1,gap,degeneracy,gapless,ground_mz,status,message\n") != std::string::npos);

  const auto report = validate_result(dir.file("gap.csv"));
  CHECK(report.ok);
  CHECK(report.rows == 12);

  // A tampered table fails validation.
  std::string broken = text;
  broken.replace(broken.find("# rows: 12"), 10, "# rows: 13");
  std::ofstream(dir.file("bad.csv")) << broken;
  CHECK_FALSE(validate_result(dir.file("bad.csv")).ok);
}

TEST_CASE("results do not depend on the worker count") {
  TempDir dir;
  const ScanConfig base = parse_config(kPhaseGap);
  for (int w : {1, 3}) {
    RunOptions opt;
    opt.workers = w;
    opt.out = dir.file("w" + std::to_string(w) + ".csv");
    run_scan(resolve_config(base, opt), opt);
  }
  CHECK(stable_body(dir.file("w1.csv")) == stable_body(dir.file("w3.csv")));
}

TEST_CASE("interrupted scans resume to the same table") {
  TempDir dir;
  const ScanConfig base = parse_config(kPhaseGap);
  RunOptions ref;
  ref.out = dir.file("ref.csv");
  run_scan(resolve_config(base, ref), ref);

  RunOptions opt;
  opt.out = dir.file("run.csv");
  opt.workers = 1;
  int jobs_seen = 0;
  opt.log = [&](const std::string& line) {
    if (line.find(" jobs, ") != std::string::npos && ++jobs_seen == 2) throw std::runtime_error("interrupted");
  };
  CHECK_THROWS_WITH(run_scan(resolve_config(base, opt), opt), "interrupted");
  REQUIRE(fs::exists(dir.file("run.csv.partial")));
  CHECK_FALSE(fs::exists(dir.file("run.csv")));

  // A torn final line is ignored.
  std::ofstream(dir.file("run.csv.partial"), std::ios::app) << "11\t0.5,2.5,-1";

  opt.log = nullptr;
  opt.resume = true;
  const auto summary = run_scan(resolve_config(base, opt), opt);
  CHECK(summary.resumed_rows == 6);  // two lambda jobs of three b values
  CHECK(stable_body(dir.file("run.csv")) == stable_body(dir.file("ref.csv")));
}

TEST_CASE("checkpoint from a different scan is refused") {
  TempDir dir;
  RunOptions opt;
  opt.out = dir.file("x.csv");
  std::ofstream(dir.file("x.csv.partial")) << "#partial 0000000000000000\n";
  opt.resume = true;
  CHECK_THROWS_AS(run_scan(resolve_config(parse_config(kPhaseGap), opt), opt), Error);
}

TEST_CASE("rows that fail carry a message") {
  TempDir dir;
  // Degenerate initial manifold: every row reports an error instead of aborting.
  const std::string text =
      "experiment = dqpt_map\nn = 6\n[fixed]\nlambda0 = 1\ndelta0 = -2\nb0 = 0\nlambda = 0.5\nb = 0\n"
      "[options]\nt_max = 2\n";
  RunOptions opt;
  opt.out = dir.file("err.csv");
  const auto summary = run_scan(resolve_config(parse_config(text), opt), opt);
  CHECK(summary.rows == 1);
  CHECK(summary.errors == 1);
  CHECK(validate_result(dir.file("err.csv")).ok);
  CHECK(slurp(dir.file("err.csv")).find(",error,") != std::string::npos);
}

TEST_CASE("shipped configs resolve") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(ALTSPIN_CONFIG_DIR)) {
    if (entry.path().extension() != ".conf") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(resolve_config(load_config(entry.path().string()), {}));
    ++seen;
  }
  CHECK(seen >= 9);
}
