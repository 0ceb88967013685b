// altspin command line: run scans, validate results, run the oracle suite.
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "altspin/altspin.h"

namespace {

void print_line(const char* line, void* stream) {
  std::fprintf(static_cast<FILE*>(stream), "%s\n", line);
  std::fflush(static_cast<FILE*>(stream));
}

int report(altspin_status s) {
  if (s == ALTSPIN_OK) return 0;
  std::fprintf(stderr, "altspin: %s: %s\n", altspin_status_name(s), altspin_last_error());
  return s == ALTSPIN_ERR_CONFIG || s == ALTSPIN_ERR_PARAMETER ? 2 : 1;
}

// ALTSPIN_THREADS beats --workers.
std::optional<int> env_threads() {
  const char* v = std::getenv("ALTSPIN_THREADS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) {
    std::fprintf(stderr, "altspin: ignoring invalid ALTSPIN_THREADS=%s\n", v);
    return std::nullopt;
  }
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalization and quench dynamics of the alternating-bond XXZ ring"};
  app.set_version_flag("--version", std::string(altspin_version()));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a parameter scan from a config file");
  std::string config;
  std::string experiment, out;
  int n = 0, workers = 0;
  bool resume = false;
  std::optional<std::uint64_t> seed;
  run->add_option("config", config, "scan config file")->required()->check(CLI::ExistingFile);
  run->add_option("--experiment", experiment, "override the experiment");
  run->add_option("--n", n, "override the chain length");
  run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "output CSV path");
  run->add_flag("--resume", resume, "continue from a partial checkpoint");
  run->add_option("--seed", seed, "random seed");

  auto* validate = app.add_subcommand("validate", "check a result file");
  std::string result;
  validate->add_option("result", result, "result CSV")->required();

  auto* oracle = app.add_subcommand("oracle", "run the built-in consistency checks");
  int oracle_n = 8;
  std::uint64_t oracle_seed = 1;
  oracle->add_option("n", oracle_n, "chain length")->required();
  oracle->add_option("--seed", oracle_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    altspin_run_options opt{};
    opt.experiment = experiment.empty() ? nullptr : experiment.c_str();
    opt.n = n;
    opt.workers = workers;
    if (const auto t = env_threads()) opt.workers = *t;
    opt.out = out.empty() ? nullptr : out.c_str();
    opt.resume = resume ? 1 : 0;
    opt.has_seed = seed ? 1 : 0;
    opt.seed = seed.value_or(0);
    return report(altspin_scan_run(config.c_str(), &opt, print_line, stderr));
  }
  if (*validate) {
    int ok = 0;
    if (const int rc = report(altspin_validate(result.c_str(), print_line, stdout, &ok))) return rc;
    return ok ? 0 : 1;
  }
  int failures = 0;
  if (const int rc = report(altspin_oracle(oracle_n, oracle_seed, print_line, stdout, &failures))) return rc;
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
