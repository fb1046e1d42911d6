// Copyright 2026 the vars project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end runs of the installed binary; VARS_CLI_BIN is injected by the
// build.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(VARS_CLI_BIN) + " " + args +
                          " 2>&1";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.out += buf;
  const int wait_status = ::pclose(pipe);
  r.status = WIFEXITED(wait_status) ? WEXITSTATUS(wait_status) : -1;
  return r;
}

// First value on the line starting with `key `, as text.
std::string field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

double num_field(const std::string& out, const std::string& key) {
  const std::string v = field(out, key);
  REQUIRE_FALSE(v.empty());
  return std::strtod(v.c_str(), nullptr);
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("vars_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fixture listing minus the one line that embeds the output directory.
std::string without_paths(const std::string& out) {
  std::istringstream in(out);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.rfind("manifest ", 0) == 0) continue;
    kept += line + "\n";
  }
  return kept;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("").status == 2);
  CHECK(run_cli("solve").status == 2);            // missing required flags
  CHECK(run_cli("--bogus-flag").status == 2);
  CHECK(run_cli("toy --scene contour --grid nonsense").status == 2);
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("solve --help").status == 0);
}

TEST_CASE("io failures exit with 3") {
  TempDir tmp;
  const RunResult missing = run_cli(
      "solve --atoms /nonexistent_dir/a.csv --signal /nonexistent_dir/x.csv");
  CHECK(missing.status == 3);

  std::ofstream(tmp.file("junk.csv")) << "1.0,banana\n2.0,3.0\n";
  std::ofstream(tmp.file("x.csv")) << "1.0\n2.0\n";
  const RunResult junk = run_cli("solve --atoms " + tmp.file("junk.csv") +
                                 " --signal " + tmp.file("x.csv"));
  CHECK(junk.status == 3);
}

TEST_CASE("domain errors exit with 4") {
  TempDir tmp;
  std::ofstream(tmp.file("a.csv")) << "1.0,0.0\n0.0,1.0\n";
  std::ofstream(tmp.file("x.csv")) << "1.0\n-0.2\n";
  const RunResult neg = run_cli("solve --atoms " + tmp.file("a.csv") +
                                " --signal " + tmp.file("x.csv") +
                                " --lambda -1");
  CHECK(neg.status == 4);
  CHECK(run_cli("check --suite bogus").status == 4);
}

TEST_CASE("solve prints the shrunken code") {
  TempDir tmp;
  REQUIRE(run_cli("fixtures --out " + tmp.file("fx")).status == 0);
  const RunResult r =
      run_cli("solve --atoms " + tmp.file("fx") + "/ortho_atoms.csv" +
              " --signal " + tmp.file("fx") + "/ortho_signal.csv" +
              " --lambda 0.3 --tol 0 --out " + tmp.file("code.csv"));
  REQUIRE(r.status == 0);

  std::istringstream lines(r.out);
  std::string l0, l1;
  REQUIRE(std::getline(lines, l0));
  REQUIRE(std::getline(lines, l1));
  CHECK(std::fabs(std::strtod(l0.c_str(), nullptr) - 0.7) <= 1e-9);
  CHECK(std::strtod(l1.c_str(), nullptr) == 0.0);
  CHECK(std::filesystem::exists(tmp.file("code.csv")));
}

TEST_CASE("fixtures are reproducible and seed-sensitive") {
  TempDir tmp;
  const RunResult a = run_cli("fixtures --out " + tmp.file("a") + " --seed 5");
  const RunResult b = run_cli("fixtures --out " + tmp.file("b") + " --seed 5");
  const RunResult c = run_cli("fixtures --out " + tmp.file("c") + " --seed 6");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  REQUIRE(c.status == 0);
  CHECK(without_paths(a.out) == without_paths(b.out));
  CHECK(without_paths(a.out) != without_paths(c.out));
  CHECK(slurp(tmp.file("a") + "/manifest.json") ==
        slurp(tmp.file("b") + "/manifest.json"));
  CHECK(slurp(tmp.file("a") + "/manifest.json") !=
        slurp(tmp.file("c") + "/manifest.json"));
  CHECK(field(a.out, "seed") == "5");
}

TEST_CASE("the seed environment variable fills in when no flag is given") {
  TempDir tmp;
  const RunResult env7 =
      run_cli("fixtures --out " + tmp.file("env"), "VARS_SEED=7");
  REQUIRE(env7.status == 0);
  CHECK(field(env7.out, "seed") == "7");

  // An explicit flag outranks the environment.
  const RunResult flag =
      run_cli("fixtures --out " + tmp.file("flag") + " --seed 9",
              "VARS_SEED=7");
  REQUIRE(flag.status == 0);
  CHECK(field(flag.out, "seed") == "9");
}

TEST_CASE("ode reports the linear equilibrium") {
  TempDir tmp;
  std::ofstream(tmp.file("a.csv")) << "0.5\n";
  std::ofstream(tmp.file("x.csv")) << "1.0\n";
  const RunResult r = run_cli("ode --mode linear --matrix " +
                              tmp.file("a.csv") + " --input " +
                              tmp.file("x.csv") + " --t-max 400");
  REQUIRE(r.status == 0);
  CHECK(field(r.out, "equilibrium") == "1");
  CHECK(std::fabs(num_field(r.out, "z_inf") - 2.0) <= 1e-6);
}

TEST_CASE("sparse ode writes the gated code") {
  TempDir tmp;
  REQUIRE(run_cli("fixtures --out " + tmp.file("fx")).status == 0);
  const RunResult r = run_cli(
      "ode --mode sparse --atoms " + tmp.file("fx") + "/ortho_atoms.csv" +
      " --input " + tmp.file("fx") + "/ortho_signal.csv" +
      " --lambda 0.3 --out-code " + tmp.file("code.csv"));
  REQUIRE(r.status == 0);
  CHECK(field(r.out, "equilibrium") == "1");
  const std::string code = slurp(tmp.file("code.csv"));
  CHECK(std::fabs(std::strtod(code.c_str(), nullptr) - 0.7) <= 1e-5);
}

TEST_CASE("toy contour doubles the object response") {
  const RunResult r = run_cli("toy --scene contour --alpha 0.5");
  REQUIRE(r.status == 0);
  CHECK(field(r.out, "equilibrium") == "1");
  CHECK(std::fabs(num_field(r.out, "object_mean") - 2.0) <= 1e-6);
  CHECK(std::fabs(num_field(r.out, "background_mean") - 1.0) <= 1e-6);
  CHECK(std::fabs(num_field(r.out, "ratio") - 2.0) <= 1e-6);
}

TEST_CASE("attention subcommand writes a saliency image") {
  TempDir tmp;
  REQUIRE(run_cli("fixtures --out " + tmp.file("fx")).status == 0);
  const RunResult r = run_cli(
      "vars --variant s --input " + tmp.file("fx") + "/bar_tokens.csv" +
      " --grid 4x4 --kernel " + tmp.file("fx") + "/bar_kernel.csv" +
      " --lambda 0.4 --out-map " + tmp.file("map.pgm"));
  REQUIRE(r.status == 0);
  CHECK(field(r.out, "variant") == "s");
  CHECK(num_field(r.out, "tokens") == 16.0);
  CHECK(num_field(r.out, "effective_lambda") == 0.4);

  const std::string pgm = slurp(tmp.file("map.pgm"));
  CHECK(pgm.rfind("P2\n4 4\n255\n", 0) == 0);
}

TEST_CASE("dynamic variant requires a projection source") {
  TempDir tmp;
  REQUIRE(run_cli("fixtures --out " + tmp.file("fx")).status == 0);
  // Neither --proj nor --rf-dim: a usage error.
  const RunResult bare = run_cli("vars --variant d --input " + tmp.file("fx") +
                                 "/tokens.vt01 --grid 2x4");
  CHECK(bare.status == 2);

  const RunResult ok = run_cli(
      "vars --variant d --input " + tmp.file("fx") + "/tokens.vt01" +
      " --grid 2x4 --proj " + tmp.file("fx") + "/projection.csv" +
      " --lambda 0.1");
  REQUIRE(ok.status == 0);
  CHECK(num_field(ok.out, "effective_lambda") == 0.2);
}

TEST_CASE("built-in checks pass end to end") {
  const RunResult all = run_cli("check --suite all");
  CHECK(all.status == 0);
  CHECK(all.out.find("checks FAILED") == std::string::npos);
  CHECK(all.out.find("all checks passed") != std::string::npos);
  CHECK(all.out.find("[FAIL]") == std::string::npos);

  const RunResult one = run_cli("check --suite toy");
  CHECK(one.status == 0);
  CHECK(one.out.find("[PASS] toy/") != std::string::npos);
}
