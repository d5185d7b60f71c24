#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "hlr/grid.hpp"
#include "hlr/io.hpp"
#include "hlr/run.hpp"
#include "json.hpp"

using namespace hlr;
namespace io = hlr::io;
using namespace hlr::run;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("hlr_io_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("double formatting round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045e-12, 1e300, 0.0,
                   5.160816e-3}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("node CSV round-trips bit for bit") {
  TempDir tmp;
  GridSpec g(2, {8, 8, 1}, {1.0, 1.0, 1.0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NodeField f(g);
  for (double& v : f.values) v = u(rng);
  io::write_node_csv(tmp.file("f.csv"), f);
  NodeField back = io::read_node_csv(tmp.file("f.csv"), g);
  for (std::size_t q = 0; q < f.values.size(); ++q)
    CHECK(back.values[q] == f.values[q]);
}

TEST_CASE("staggered CSV round-trips bit for bit, per axis") {
  TempDir tmp;
  GridSpec g(3, {4, 4, 4}, {1.0, 1.0, 1.0});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StaggeredField E(g);
  for (int a = 0; a < 3; ++a)
    for (double& v : E.comp[a]) v = u(rng);
  for (int a = 0; a < 3; ++a)
    io::write_staggered_csv(tmp.file("e" + std::to_string(a) + ".csv"), E, a);
  StaggeredField back(g);
  for (int a = 0; a < 3; ++a)
    back = io::read_staggered_csv(tmp.file("e" + std::to_string(a) + ".csv"),
                                  g, std::move(back));
  for (int a = 0; a < 3; ++a)
    for (std::size_t q = 0; q < E.comp[a].size(); ++q)
      CHECK(back.comp[a][q] == E.comp[a][q]);
}

TEST_CASE("config parsing handles comments and reports line numbers") {
  auto cfg = io::parse_config_text(
      "# leading comment\n"
      "grid.cells = 32\n"
      "\n"
      "method = zigzag  # trailing comment\n"
      "tol = 1e-9\n",
      "inline");
  CHECK(cfg.at("grid.cells") == "32");
  CHECK(cfg.at("method") == "zigzag");
  CHECK(cfg.at("tol") == "1e-9");

  CHECK_THROWS_WITH_AS(
      io::parse_config_text("a = 1\nnot a key value pair\n", "inline"),
      doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("unknown config keys are rejected by the command runner") {
  CommandResult r = run_command("solve", {{"grid.cellz", "16"}});
  CHECK(r.exit_code == 1);
  CHECK(r.message.find("grid.cellz") != std::string::npos);
}

TEST_CASE("report JSON carries the stable field set") {
  SolveReport rep;
  rep.status = SolveStatus::Converged;
  rep.dim = 2;
  rep.passes = 7;
  rep.energy_history = {3.0, 2.0, 1.5};
  rep.gauss_residual = 1e-14;
  rep.curl_residual = 2e-9;
  rep.avg_field = {1e-17, -2e-17, 0.0};
  rep.wall_time_ms = 12.5;

  nlohmann::json j = nlohmann::json::parse(io::report_to_json(rep));
  CHECK(j.at("passes") == 7);
  CHECK(j.at("energy_history").size() == 3);
  CHECK(j.at("gauss_residual") == 1e-14);
  CHECK(j.at("curl_residual") == 2e-9);
  CHECK(j.at("avg_field").size() == 2);  // trimmed to the problem dimension
  CHECK(j.at("wall_time_ms") == 12.5);
  CHECK(j.at("error_inf").is_null());  // no exact solution attached

  rep.error_inf = 5.2e-3;
  j = nlohmann::json::parse(io::report_to_json(rep));
  CHECK(j.at("error_inf") == 5.2e-3);
}

TEST_CASE("write_report_json produces a parseable file") {
  TempDir tmp;
  SolveReport rep;
  rep.status = SolveStatus::MaxPassesReached;
  rep.dim = 3;
  rep.passes = 1;
  rep.energy_history = {1.0};
  io::write_report_json(tmp.file("r.json"), rep);
  std::ifstream in(tmp.file("r.json"));
  nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j.at("avg_field").size() == 3);
}
