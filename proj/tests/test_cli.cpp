#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "semidelta/sweep.hpp"

namespace fs = std::filesystem;
using namespace semidelta;

namespace {

fs::path scratch_dir(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() / "semidelta_cli_tests" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SEMIDELTA_CLI_PATH) + " " + args;
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("config parser") {
  std::istringstream cfg(R"([physics]
hbar = 0.1
alpha = 1
[state]
q = -2
p = 1
[time]
t_list = 1 2 3
[suite]
name = theorem1
)");
  const Config c = parse_config(cfg);
  CHECK(c.hbar == 0.1);
  CHECK(c.t_list.size() == 3);
  CHECK(c.suite == "theorem1");

  std::istringstream badnum("[physics]\nhbar = abc\n");
  CHECK_THROWS_AS((void)parse_config(badnum), ConfigError);
  std::istringstream badkey("[physics]\nfoo = 1\n");
  CHECK_THROWS_AS((void)parse_config(badkey), ConfigError);
  std::istringstream badq("[state]\nq = 0\n");
  CHECK_THROWS_AS((void)parse_config(badq), ConfigError);
  // the q=0 message cites the standing assumption
  try {
    std::istringstream again("[state]\nq = 0\n");
    (void)parse_config(again);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("q=0") != std::string::npos);
  }
}

TEST_CASE("minimal scenario produces one row per time point") {
  const fs::path dir = scratch_dir("minimal");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, R"([physics]
hbar = 0.2
alpha = 1
[state]
q = -2
p = 1
[time]
t_list = 0.5 1.0 1.5
[suite]
name = theorem1
)");
  const int rc = run_cli("--config " + cfg.string() + " --out " + (dir / "out").string() +
                         " --threads 2 > " + (dir / "log.txt").string());
  CHECK(rc == 0);
  const std::string errors = slurp(dir / "out" / "errors.csv");
  CHECK(count_lines(errors) == 4);  // header + 3 rows
  CHECK(errors.rfind("hbar,m,alpha,sigma0,q,p,t,lhs", 0) == 0);
  CHECK(fs::exists(dir / "out" / "plots.gp"));
  CHECK(fs::exists(dir / "out" / "sweep_summary.csv"));
}

TEST_CASE("invalid config with q = 0 exits with code 2") {
  const fs::path dir = scratch_dir("badq");
  const fs::path cfg = dir / "bad.cfg";
  write_file(cfg, R"([state]
q = 0
p = 1
)");
  const fs::path err = dir / "stderr.txt";
  const int rc =
      run_cli("--config " + cfg.string() + " --out " + dir.string() + " 2> " + err.string());
  CHECK(rc == 2);
  const std::string msg = slurp(err);
  CHECK(msg.find("q=0") != std::string::npos);
}

TEST_CASE("CSV output is byte-identical across thread counts and reruns") {
  const fs::path dir = scratch_dir("determinism");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, R"([physics]
hbar = 0.2
alpha = 1
[state]
q = -2
p = 1
[time]
t_list = 1.0
[sweep]
hbar_list = 0.3 0.25 0.2 0.15
[suite]
name = theorem1
)");
  for (const char* threads : {"1", "4"}) {
    const fs::path out = dir / (std::string("out") + threads);
    const int rc = run_cli("--config " + cfg.string() + " --out " + out.string() +
                           " --threads " + threads + " > /dev/null");
    CHECK(rc == 0);
  }
  CHECK(slurp(dir / "out1" / "errors.csv") == slurp(dir / "out4" / "errors.csv"));
  CHECK(slurp(dir / "out1" / "sweep_summary.csv") ==
        slurp(dir / "out4" / "sweep_summary.csv"));

  // rerun with the same thread count: identical again
  const int rc = run_cli("--config " + cfg.string() + " --out " +
                         (dir / "out1b").string() + " --threads 1 > /dev/null");
  CHECK(rc == 0);
  CHECK(slurp(dir / "out1" / "errors.csv") == slurp(dir / "out1b" / "errors.csv"));
}

TEST_CASE("lemmas suite runs through the CLI") {
  const fs::path dir = scratch_dir("lemmas");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, R"([suite]
name = lemmas
)");
  const fs::path log = dir / "log.txt";
  const int rc = run_cli("--config " + cfg.string() + " --out " + (dir / "out").string() +
                         " --strict > " + log.string());
  CHECK(rc == 0);
  CHECK(slurp(log).find("[PASS] lemma bound suite") != std::string::npos);
}
