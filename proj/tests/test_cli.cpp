#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "privctl/experiment.hpp"
#include "test_support.hpp"

using namespace privctl;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(PRIVCTL_CLI_PATH) + "\" " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("exit codes") {
  const fs::path out = testing::scratch_dir("cli_case");
  CHECK(run("case-study --out " + quoted(out)) == 0);
  CHECK(fs::exists(out / "report.txt"));
  CHECK(run("case-study --T 5 --out " + quoted(out)) == 1);
  CHECK(run("case-study --no-such-option 1") != 0);
  CHECK(run("case-study --rho 2") == 1);
  CHECK(run("") != 0);
  CHECK(run("synthesize " + quoted(out / "does_not_exist")) != 0);
}

TEST_CASE("synthesize on an exchange directory") {
  const fs::path out = testing::scratch_dir("cli_exchange");
  REQUIRE(run("case-study --out " + quoted(out)) == 0);
  const fs::path dir = testing::scratch_dir("cli_exchange_copy");
  for (const char* f : {"X0.csv", "X1.csv", "V0.csv", "manifest.txt"})
    fs::copy_file(out / "cloud" / f, dir / f);
  CHECK(run("synthesize " + quoted(dir)) == 0);
  CHECK(read_matrix_csv(dir / "K.csv") == read_matrix_csv(out / "cloud" / "K.csv"));

  // A disturbance bound this large leaves no stabilizable margin.
  const Matrix X0 = read_matrix_csv(dir / "X0.csv");
  write_matrix_csv(dir / "delta.csv", "Delta",
                   Matrix(100.0 * Matrix::Identity(X0.rows(), X0.rows())));
  std::ofstream(dir / "manifest.txt")
      << "m=2\nmode=noisy\nn=4\nT=" << X0.cols() << "\n";
  CHECK(run("synthesize " + quoted(dir)) == 2);
}

TEST_CASE("settings precedence: config file, environment, flags") {
  const fs::path dir = testing::scratch_dir("cli_precedence");
  std::ofstream(dir / "cfg.txt") << "seed=3\nd_max=0\n";
  const fs::path a = dir / "a", b = dir / "b", c = dir / "c";
  REQUIRE(run("case-study --config " + quoted(dir / "cfg.txt") + " --out " + quoted(a)) == 0);
  REQUIRE(run("case-study --config " + quoted(dir / "cfg.txt") + " --out " + quoted(b),
              "PRIVCTL_SEED=4") == 0);
  REQUIRE(run("case-study --config " + quoted(dir / "cfg.txt") + " --seed 5 --out " +
                  quoted(c),
              "PRIVCTL_SEED=4") == 0);
  CHECK(read_key_values(a / "report.txt").at("seed") == "3");
  CHECK(read_key_values(b / "report.txt").at("seed") == "4");
  CHECK(read_key_values(c / "report.txt").at("seed") == "5");
  CHECK(run("case-study --config " + quoted(dir / "missing.txt")) == 1);
}
