/**
 * Copyright 2026 The lopsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "lopsim_cli_test.log";
  const std::string cmd =
      std::string(LOPSIM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
#ifdef _WIN32
  const int code = status;
#else
  const int code = WEXITSTATUS(status);
#endif
  return {code, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(split_csv_line(line));
  return rows;
}

const fs::path kTmp = fs::temp_directory_path() / "lopsim_cli_out";

struct TmpDirSetup {
  TmpDirSetup() {
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);
  }
} g_setup;

}  // namespace

TEST_CASE("teleport command prints the success probability") {
  const RunResult r = run_cli("teleport --encoding pol --n 2 --ideal");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("p_success 0.6666666667") != std::string::npos);
  CHECK(r.output.find("min_success_fidelity 1") != std::string::npos);
}

TEST_CASE("teleport validates its arguments") {
  CHECK(run_cli("teleport --n 0").exit_code == 2);
  CHECK(run_cli("teleport --eta 1.5").exit_code == 2);
  CHECK(run_cli("teleport --alpha 1 --beta 1").exit_code == 2);
  CHECK(run_cli("teleport --encoding circular").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
}

TEST_CASE("teleport failure split follows the input amplitudes") {
  const RunResult r =
      run_cli("teleport --encoding klm --n 1 --ideal --alpha 1 --beta 0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("p_failure_all_h 0.5") != std::string::npos);
  CHECK(r.output.find("p_failure_all_v 0\n") != std::string::npos);
}

TEST_CASE("teleport monte-carlo mode is seed-deterministic") {
  const std::string args =
      "teleport --encoding klm --n 2 --eta 0.8 --dark 1e-7 --mc-samples 20000 "
      "--seed 99";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("mc_p_f") != std::string::npos);
}

TEST_CASE("csign command reports quarter success and unit fidelity") {
  for (const std::string args :
       {std::string("csign --n 1 --ideal"),
        std::string("csign --minimal --ideal"),
        std::string("csign --minimal --non-resolving --ideal")}) {
    const RunResult r = run_cli(args);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("p_success 0.25") != std::string::npos);
    CHECK(r.output.find("min_success_fidelity 1") != std::string::npos);
  }
}

TEST_CASE("prep command reports chain probabilities and amplitudes") {
  const RunResult r = run_cli("prep --chain tprime1_pol --dump-amplitudes");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("success_probability 0.015625") != std::string::npos);
  CHECK(r.output.find("fidelity 1") != std::string::npos);
  int amp_lines = 0, half_magnitude = 0;
  std::stringstream ss(r.output);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("amp ", 0) != 0) continue;
    ++amp_lines;
    if (line.find("0.500000000000") != std::string::npos) ++half_magnitude;
  }
  CHECK(amp_lines == 4);
  CHECK(half_magnitude == 4);

  const RunResult klm = run_cli("prep --chain tprime1_klm");
  CHECK(klm.output.find("success_probability 0.0625") != std::string::npos);
  const RunResult ghz = run_cli("prep --chain ghz_to_cluster --ideal");
  CHECK(ghz.output.find("fidelity 1") != std::string::npos);
  CHECK(run_cli("prep --chain unknown").exit_code == 2);
}

TEST_CASE("error-analysis CSV output") {
  const fs::path csv = kTmp / "ea.csv";
  const RunResult r =
      run_cli("error-analysis --out " + csv.string() + " --plot-data");
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == 7);  // header + 2 encodings x 3 n x 1 eta x 1 dark
  CHECK(rows[0] ==
        std::vector<std::string>{"encoding", "n", "eta", "dark", "p_success", "p_f",
                                 "p_nde", "p_e", "trunc_bound", "alpha", "beta"});

  SUBCASE("re-running produces byte-identical output") {
    const std::string first = slurp(csv);
    REQUIRE(run_cli("error-analysis --out " + csv.string()).exit_code == 0);
    CHECK(slurp(csv) == first);
  }

  SUBCASE("fig2 plot data: p_f decreasing, p_e increasing in n") {
    const fs::path dat = kTmp / "fig2.dat";
    REQUIRE(fs::exists(dat));
    std::ifstream in(dat);
    std::string header;
    std::getline(in, header);
    double prev_pf = 1.0, prev_pe = 0.0;
    int n;
    double pf, pe;
    int lines = 0;
    while (in >> n >> pf >> pe) {
      CHECK(pf < prev_pf);
      CHECK(pe > prev_pe);
      prev_pf = pf;
      prev_pe = pe;
      ++lines;
    }
    CHECK(lines == 3);
    CHECK(fs::exists(kTmp / "fig3.dat"));
    CHECK(fs::exists(kTmp / "fig4.dat"));
  }

  SUBCASE("JSON mirror agrees field-for-field") {
    const fs::path js = kTmp / "ea.json";
    REQUIRE(run_cli("error-analysis --format json --out " + js.string()).exit_code ==
            0);
    const nlohmann::json arr = nlohmann::json::parse(slurp(js));
    REQUIRE(arr.size() == rows.size() - 1);
    for (std::size_t i = 0; i < arr.size(); ++i)
      for (std::size_t c = 0; c < rows[0].size(); ++c)
        CHECK(arr[i][rows[0][c]].get<std::string>() == rows[i + 1][c]);
  }
}

TEST_CASE("error-analysis exit codes") {
  CHECK(run_cli("error-analysis --prune-eps 1e-3").exit_code == 3);
  CHECK(run_cli("error-analysis --out /nonexistent-dir/x.csv").exit_code == 4);
  CHECK(run_cli("error-analysis --eta-grid 2.0").exit_code == 2);
}

TEST_CASE("config file provides defaults that flags override") {
  const fs::path cfg = kTmp / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "encoding=pol\nn=3\nideal=true\n";
  }
  const RunResult r = run_cli("teleport --config " + cfg.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("p_success 0.75") != std::string::npos);
  const RunResult o = run_cli("teleport --config " + cfg.string() + " --n 1");
  CHECK(o.output.find("p_success 0.5") != std::string::npos);
}
