#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cee/ioutil.hpp"
#include "cee/tpm.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(CEE_BIN_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "cee_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  auto path = work_dir() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

std::string not_tpm_json() {
  return R"({"n":1,"convention":"little-endian","tpm":[[0,1],[1,0]]})";
}

std::string sim_config_json() {
  return R"({"num_particles":2,"lattice_size":8,"steps":4000,"hop_prob":0.8,)"
         R"("coupling":0,"seed":7,"area_tn":5})";
}

}  // namespace

TEST_CASE("analyze reports the NOT complex") {
  auto tpm = write_file("not.json", not_tpm_json());
  auto r = run_cli("analyze " + tpm + " --state 1");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"complexes\"") != std::string::npos);
  CHECK(r.output.find("\"big_phi\": 1.0") != std::string::npos);
  CHECK(r.output.find("\"phi_metric\": \"emd\"") != std::string::npos);
}

TEST_CASE("analyze of an all-noise file succeeds with no complexes") {
  auto tpm = write_file("noise.json",
                        R"({"n":1,"tpm":[[0.5,0.5],[0.5,0.5]]})");
  auto r = run_cli("analyze " + tpm + " --state 0");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"complexes\": []") != std::string::npos);
}

TEST_CASE("malformed rows exit 2 with the violated invariant") {
  auto tpm = write_file("bad.json", R"({"n":1,"tpm":[[0.4,0.5],[0.5,0.5]]})");
  auto r = run_cli("analyze " + tpm + " --state 0");
  CHECK(r.code == 2);
  CHECK(r.output.find("row-not-stochastic") != std::string::npos);
}

TEST_CASE("state length mismatches exit 2") {
  auto tpm = write_file("not2.json", not_tpm_json());
  auto r = run_cli("analyze " + tpm + " --state 01");
  CHECK(r.code == 2);
  CHECK(r.output.find("state-length-mismatch") != std::string::npos);
}

TEST_CASE("compose then factorize round-trips") {
  auto tpm = write_file("not3.json", not_tpm_json());
  auto composed = (work_dir() / "nn.json").string();
  auto r1 = run_cli("compose " + tpm + " " + tpm + " --out " + composed);
  CHECK(r1.code == 0);
  cee::Tpm parsed = cee::read_tpm_file(composed);
  CHECK(parsed.n() == 2);

  auto r2 = run_cli("factorize " + composed + " --epsilon 1e-9");
  CHECK(r2.code == 0);
  CHECK(r2.output.find("\"num_factors\": 2") != std::string::npos);
}

TEST_CASE("simulate writes deterministic trajectory files") {
  auto config = write_file("sim.json", sim_config_json());
  auto out1 = (work_dir() / "traj1.json").string();
  auto out2 = (work_dir() / "traj2.json").string();
  CHECK(run_cli("simulate " + config + " --out " + out1).code == 0);
  CHECK(run_cli("simulate " + config + " --out " + out2).code == 0);
  CHECK(cee::read_file(out1) == cee::read_file(out2));
  CHECK(cee::read_file(out1).find("\"s_e0\"") != std::string::npos);
}

TEST_CASE("pipeline reports factor groups, ledger, and zero work") {
  auto config = write_file("pipe.json", sim_config_json());
  auto r = run_cli("pipeline " + config + " --epsilon 0.05");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"num_factors\": 2") != std::string::npos);
  CHECK(r.output.find("\"physicality_work\": 0.0") != std::string::npos);
  CHECK(r.output.find("\"entropy_area_bits\": 5") != std::string::npos);
  CHECK(r.output.find("\"empirical_tpm\"") != std::string::npos);
}

TEST_CASE("pipeline with a frozen walker reports zero bits") {
  auto config = write_file(
      "frozen.json",
      R"({"num_particles":1,"lattice_size":4,"steps":50,"hop_prob":0,"seed":1})");
  auto r = run_cli("pipeline " + config);
  CHECK(r.code == 0);
  CHECK(r.output.find("\"bits\": 0") != std::string::npos);
}

TEST_CASE("pipeline with strong coupling keeps the particles in one factor") {
  auto config = write_file(
      "coupled.json",
      R"({"num_particles":2,"lattice_size":8,"steps":4000,"hop_prob":0.8,)"
      R"("coupling":1,"seed":7})");
  auto r = run_cli("pipeline " + config + " --epsilon 0.05");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"num_factors\": 1") != std::string::npos);
}

TEST_CASE("grain respects budget with exit 3 and partial flag") {
  auto tpm = write_file("not4.json", not_tpm_json());
  auto composed = (work_dir() / "nn2.json").string();
  run_cli("compose " + tpm + " " + tpm + " --out " + composed);
  auto ok = run_cli("grain " + composed + " --state 11");
  CHECK(ok.code == 0);
  CHECK(ok.output.find("\"partial\": false") != std::string::npos);

  auto partial = run_cli("grain " + composed + " --state 11 --budget 2");
  CHECK(partial.code == 3);
  CHECK(partial.output.find("\"partial\": true") != std::string::npos);
}

TEST_CASE("every command is byte-deterministic across runs") {
  auto tpm = write_file("not5.json", not_tpm_json());
  auto composed = (work_dir() / "nn3.json").string();
  run_cli("compose " + tpm + " " + tpm + " --out " + composed);
  auto config = write_file("sweep.json", sim_config_json());

  std::vector<std::string> commands = {
      "analyze " + composed + " --state 10",
      "factorize " + composed,
      "grain " + composed + " --state 01",
      "pipeline " + config,
  };
  for (const auto& cmd : commands) {
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.code == b.code);
    CHECK(a.output == b.output);
  }
}

TEST_CASE("sweep writes the coupling CSV") {
  auto config = write_file(
      "sweep2.json",
      R"({"num_particles":2,"lattice_size":8,"steps":2000,"hop_prob":0.8,"seed":3})");
  auto csv = (work_dir() / "sweep.csv").string();
  auto r = run_cli("sweep " + config + " --couplings 0,1 --seeds 2 --csv " + csv);
  CHECK(r.code == 0);
  auto text = cee::read_file(csv);
  CHECK(text.rfind("coupling,seed,residual\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);  // header + 4 rows
}
