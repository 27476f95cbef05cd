#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hl/io.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string data(const std::string& name) {
  return std::string(HL_DATA_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("hl_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("smatrix on the free Dirichlet scenario emits a constant -1 column") {
  const fs::path out = fresh_dir("smatrix");
  REQUIRE(run_cli("smatrix --config " + data("smatrix_dirichlet.json") + " --out " +
                  out.string() + " --quiet") == 0);

  std::ifstream csv(out / "smatrix.csv");
  REQUIRE(csv.good());
  std::string line;
  std::getline(csv, line);
  CHECK(line == "k,unitarity_defect,re_S_1_1,im_S_1_1");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // k
    std::getline(ss, cell, ',');  // defect
    std::getline(ss, cell, ',');  // re S
    CHECK(cell == "-1");
    std::getline(ss, cell, ',');  // im S
    CHECK(cell == "0");
  }
  CHECK(rows == 100);

  const auto report = hl::Json::parse(hl::read_file((out / "smatrix.json").string()));
  CHECK(report["max_unitarity_defect"].get<double>() <= 1e-14);
  CHECK(fs::exists(out / "summary.txt"));
  fs::remove_all(out);
}

TEST_CASE("identical configs give byte-identical CSV output") {
  const fs::path out1 = fresh_dir("det1"), out2 = fresh_dir("det2");
  REQUIRE(run_cli("smatrix --config " + data("well_dirichlet.json") + " --out " + out1.string() +
                  " --quiet") == 0);
  REQUIRE(run_cli("smatrix --config " + data("well_dirichlet.json") + " --out " + out2.string() +
                  " --quiet") == 0);
  CHECK(hl::read_file((out1 / "smatrix.csv").string()) ==
        hl::read_file((out2 / "smatrix.csv").string()));
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("levinson on the free Neumann scenario") {
  const fs::path out = fresh_dir("levinson");
  REQUIRE(run_cli("levinson --config " + data("levinson_neumann.json") + " --out " +
                  out.string() + " --quiet") == 0);
  const auto report = hl::Json::parse(hl::read_file((out / "levinson.json").string()));
  CHECK(report["mu"].get<int>() == 1);
  CHECK(report["N"].get<int>() == 0);
  CHECK(std::abs(report["xi0_plus"].get<double>()) <= 1e-6);
  CHECK(report["defect"].get<double>() <= 1e-6);
  fs::remove_all(out);
}

TEST_CASE("bound-states finds the well state and --set overrides reach the config") {
  const fs::path out = fresh_dir("bound");
  REQUIRE(run_cli("bound-states --config " + data("well_dirichlet.json") + " --out " +
                  out.string() + " --quiet") == 0);
  auto report = hl::Json::parse(hl::read_file((out / "bound-states.json").string()));
  CHECK(report["count"].get<int>() == 1);

  // a shallow override removes the bound state
  REQUIRE(run_cli("bound-states --config " + data("well_dirichlet.json") +
                  " --set potential.depth=1.0 --out " + out.string() + " --quiet") == 0);
  report = hl::Json::parse(hl::read_file((out / "bound-states.json").string()));
  CHECK(report["count"].get<int>() == 0);
  fs::remove_all(out);
}

TEST_CASE("validation failures exit 2") {
  const fs::path out = fresh_dir("bad");
  const fs::path cfg = out / "bad.json";
  std::ofstream(cfg) << "{ not json";
  CHECK(run_cli("smatrix --config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK(run_cli("smatrix --config " + (out / "missing.json").string() + " --out " +
                out.string()) == 2);
  const auto report = hl::Json::parse(hl::read_file((out / "smatrix.json").string()));
  CHECK(report["error"].get<std::string>() == "ConfigError");
  fs::remove_all(out);
}

TEST_CASE("numerical failures exit 3 with the module error name") {
  const fs::path out = fresh_dir("num");
  // z = -1 is the free mixed-channel eigenvalue for theta = pi/4
  CHECK(run_cli("resolvent --config " + data("resolvent_mixed.json") + " --out " + out.string()) ==
        3);
  const auto report = hl::Json::parse(hl::read_file((out / "resolvent.json").string()));
  CHECK(report["error"].get<std::string>() == "SpectralPoint");
  fs::remove_all(out);
}

TEST_CASE("remaining commands run clean on the well scenario") {
  const fs::path out = fresh_dir("rest");
  const std::string cfg = " --config " + data("well_dirichlet.json") + " --out " + out.string() +
                          " --quiet";
  CHECK(run_cli("validate-bc" + cfg) == 0);
  CHECK(run_cli("normal-form" + cfg) == 0);
  CHECK(run_cli("asymptotics" + cfg) == 0);
  const auto report = hl::Json::parse(hl::read_file((out / "asymptotics.json").string()));
  CHECK(report["slope"].get<double>() == doctest::Approx(-2.0).epsilon(0.15));
  fs::remove_all(out);
}
