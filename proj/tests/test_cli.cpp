// Copyright 2026 The subflux Authors
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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd =
      std::string(SUBFLUX_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("subflux_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("spectrum reports the device frequency and writes the sweep") {
  const auto dir = fresh_dir("spectrum");
  const auto r = run_cli("spectrum --phi-points 5 --out " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("f_ge = 1.332") != std::string::npos);
  const std::string csv = slurp(dir / "flux_sweep.csv");
  CHECK(csv.find("phi_ext_rad,f_ge_GHz,f_ef_GHz") != std::string::npos);
  CHECK(csv.find("# subflux") != std::string::npos);
  CHECK(csv.find("config=") != std::string::npos);
  int rows = 0;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#' && line.find("phi_ext") == std::string::npos) ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("an empty flux grid is a config error with exit code 2") {
  const auto dir = fresh_dir("badgrid");
  const auto r = run_cli("spectrum --phi-points 0 --out " + dir.string(), dir);
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown config keys exit with code 2 and the field path") {
  const auto dir = fresh_dir("badkey");
  const auto r = run_cli("--set circuit.e_x=1.0 noise-budget --out " + dir.string(), dir);
  CHECK(r.exit_code == 2);
  CHECK(r.stdout_text.find("$.circuit.e_x") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical output") {
  const auto d1 = fresh_dir("det1");
  const auto d2 = fresh_dir("det2");
  const std::string args =
      "--seed 42 --set rb.lengths=[1,2,4,8] --set rb.n_sequences=6 rb --out ";
  CHECK(run_cli(args + d1.string(), d1).exit_code == 0);
  CHECK(run_cli(args + d2.string(), d2).exit_code == 0);
  CHECK(slurp(d1 / "rb_decay.csv") == slurp(d2 / "rb_decay.csv"));
  CHECK(slurp(d1 / "rb_fit.json") == slurp(d2 / "rb_fit.json"));
  CHECK(!slurp(d1 / "rb_decay.csv").empty());
}

TEST_CASE("noise-budget emits the derived quantities") {
  const auto dir = fresh_dir("budget");
  const auto r = run_cli("noise-budget --out " + dir.string(), dir);
  CHECK(r.exit_code == 0);
  const std::string js = slurp(dir / "noise_budget.json");
  CHECK(js.find("resonator_temperature_mK") != std::string::npos);
  CHECK(js.find("mutual_inductance_fit_ph") != std::string::npos);
  CHECK(r.stdout_text.find("coherence limit") != std::string::npos);
}

TEST_CASE("config file round trip through --config") {
  const auto dir = fresh_dir("cfg");
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"circuit": {"e_j": 1.69}, "seed": 7, "rb": {"lengths": [1, 2], "n_sequences": 3}})";
  }
  const auto r = run_cli("--config " + (dir / "run.json").string() + " rb --noise-free --out " +
                             dir.string(),
                         dir);
  CHECK(r.exit_code == 0);
  CHECK(slurp(dir / "rb_decay.csv").find("seed=7") != std::string::npos);
}

TEST_SUITE_END();
