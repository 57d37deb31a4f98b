// Batch CLI: runs the numbered verification suites from a flat config file and
// writes errors.csv, sweep_summary.csv and plots.gp into the output directory.
// Exit codes: 0 ok, 1 numeric failure (or failed verdict with --strict),
// 2 invalid config.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semidelta/semidelta.hpp"

namespace fs = std::filesystem;
using namespace semidelta;

namespace {

int run_one(const Config& cfg, const std::string& suite, const fs::path& out_dir,
            int threads, bool strict) {
  fs::create_directories(out_dir);
  SuiteResult result;
  bool numeric_failure = false;
  try {
    result = run_suite(cfg, suite, threads);
  } catch (const QuadratureError& e) {
    std::cerr << "numeric failure in suite " << suite << ": " << e.what()
              << " (achieved " << e.achieved_error << ")\n";
    numeric_failure = true;
  } catch (const std::exception& e) {
    std::cerr << "failure in suite " << suite << ": " << e.what() << "\n";
    numeric_failure = true;
  }
  write_errors_csv(out_dir / "errors.csv", result.rows);
  write_summary_csv(out_dir / "sweep_summary.csv", result.summary);
  write_plot_script(out_dir / "plots.gp", suite);
  bool verdict_failure = false;
  for (const SuiteVerdict& v : result.verdicts) {
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.name << " — " << v.detail << "\n";
    verdict_failure = verdict_failure || !v.pass;
  }
  if (numeric_failure) return 1;
  if (strict && verdict_failure) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state dynamics for the 1-D delta interaction: "
               "scaling sweeps and verification suites"};
  std::string config_path;
  std::string suite_override;
  std::string out_dir = ".";
  int threads = 0;
  bool strict = false;
  app.add_option("--config", config_path, "config file")->required();
  app.add_option("--suite", suite_override,
                 "theorem1 | theorem2 | dirichlet | lemmas | oracle | all");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "thread count (0 = auto)");
  app.add_flag("--strict", strict, "treat failed verdicts as errors");
  CLI11_PARSE(app, argc, argv);

  Config cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  }
  const std::string suite = suite_override.empty() ? cfg.suite : suite_override;

  if (suite == "all") {
    int worst = 0;
    for (const char* s : {"theorem1", "theorem2", "dirichlet", "lemmas", "oracle"}) {
      std::cout << "== suite " << s << " ==\n";
      worst = std::max(worst, run_one(cfg, s, fs::path(out_dir) / s, threads, strict));
    }
    return worst;
  }
  if (suite != "theorem1" && suite != "theorem2" && suite != "dirichlet" &&
      suite != "lemmas" && suite != "oracle") {
    std::cerr << "invalid config: unknown suite '" << suite << "'\n";
    return 2;
  }
  return run_one(cfg, suite, out_dir, threads, strict);
}
