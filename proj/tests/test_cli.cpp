#include "doctest.h"

#include "ddm/report.hpp"
#include "ddm/run.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "ddm_lab_cli_test";

int run(const std::string& args) {
  fs::create_directories(kWork);
  const std::string cmd = std::string(DDM_LAB_EXE) + " " + args + " > " + (kWork / "stdout.txt").string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string cfg(const char* name) { return (fs::path(DDM_CONFIG_DIR) / name).string(); }

}  // namespace

TEST_CASE("stationary config certifies") {
  CHECK(run("certify --config " + cfg("stationary.json") + " --out " + (kWork / "st").string()) == 0);
  CHECK(fs::exists(kWork / "st.json"));
  const auto rows = ddm::report::parse_csv(slurp(kWork / "st.q0.csv"));
  REQUIRE(rows.size() == 12);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] == "1");
}

TEST_CASE("malformed config exits with 1 and names the field") {
  CHECK(run("certify --config " + cfg("malformed_row.json") + " --out " + (kWork / "bad").string()) == 1);
  CHECK(slurp(kWork / "stdout.txt").find("model.P[1]") != std::string::npos);
  CHECK(run("certify --config " + (kWork / "missing.json").string()) == 1);
  CHECK(run("frobnicate --config " + cfg("stationary.json")) == 1);
}

TEST_CASE("reports are identical across runs and seeds are honoured") {
  REQUIRE(run("phi --config " + cfg("reference.json") + " --out " + (kWork / "a").string()) == 0);
  REQUIRE(run("phi --config " + cfg("reference.json") + " --out " + (kWork / "b").string()) == 0);
  CHECK(slurp(kWork / "a.json") == slurp(kWork / "b.json"));
  REQUIRE(run("selftest --config " + cfg("reference.json") + " --seed 99 --out " + (kWork / "s").string()) == 0);
  CHECK(slurp(kWork / "s.json").find("\"seed\": 99") != std::string::npos);
}

TEST_CASE("violated claims map to exit code 2") {
  ddm::report::Report r;
  CHECK(ddm::run::exit_code_for(r) == 0);
  r.claims.push_back({"c"});
  r.claims.back().status = ddm::report::Status::Violated;
  CHECK(ddm::run::exit_code_for(r) == 2);
}
