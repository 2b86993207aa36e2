#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "survbound/cli.hpp"
#include "survbound/error.hpp"
#include "survbound/io.hpp"

using namespace survbound;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "survbound");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "survbound_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("cli_moments") {
  const auto spec = write_file("gamma.json", R"({"kind": "gamma_half", "gamma": 2.0})");
  const Run r = run({"moments", "--spec", spec.string(), "--order", "4"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "k,h,h_scaled,e,e_scaled,b,b_scaled");
  std::getline(lines, line);
  std::getline(lines, line);
  std::getline(lines, line);
  const auto row = split(line);
  CHECK(row[0] == "2");
  CHECK(std::stod(row[1]) == doctest::Approx(3.0));  // 3 gamma^2 / 4
}

TEST_CASE("cli_exact_breit_wigner") {
  const auto spec = write_file("bw.json", R"({"kind": "breit_wigner", "gamma": 1.0})");
  const Run r = run({"exact", "--spec", spec.string(), "--t-max", "5", "--grid", "64"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,re,im,abs,p");
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto row = split(line);
    CHECK(std::abs(std::stod(row[3]) - std::exp(-std::stod(row[0]))) < 1e-15);
    ++rows;
  }
  CHECK(rows == 64);
}

TEST_CASE("cli_input_errors") {
  const Run empty = run({"moments", "--spec", write_file("empty.json", "").string()});
  CHECK(empty.code == 2);
  CHECK(empty.err.find("'kind'") != std::string::npos);

  const Run missing = run({"exact", "--spec", write_file("nogamma.json", R"({"kind": "power_law", "exponent": 3.5})").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("'gamma'") != std::string::npos);

  CHECK(run({"figure", "fig9", "--out", scratch().string()}).code == 2);
  CHECK(run({"moments", "--bogus"}).code == 1);
  CHECK(run({}).code == 1);
  const auto sq = write_file("sq.json", R"({"kind": "square", "m": 1})");
  CHECK(run({"bounds", "--spec", sq.string(), "--order", "18"}).code == 2);
  CHECK(run({"bounds", "--spec", sq.string(), "--format", "xml"}).code == 1);
}

TEST_CASE("cli_weight_rule") {
  const auto heavy = write_file("heavy.json", R"({"kind": "discrete", "atoms": [[0, 2.0], [1, 1.0]]})");
  CHECK(run({"exact", "--spec", heavy.string()}).code == 2);
  CHECK(run({"exact", "--spec", heavy.string(), "--renormalize"}).code == 0);
  const auto close = write_file("close.json", R"({"kind": "discrete", "atoms": [[0, 0.6], [1, 0.6]]})");
  CHECK(run({"exact", "--spec", close.string()}).code == 0);
}

TEST_CASE("cli_tabulated_file") {
  write_file("rho.csv", "E,rho\n0,1\n1,1\n");
  const auto spec = write_file("tab.json", R"({"kind": "tabulated", "file": "rho.csv"})");
  const Run r = run({"moments", "--spec", spec.string(), "--order", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\n1,0.5,0.5,") != std::string::npos);

  write_file("bad.csv", "energy,density\n0,1\n1,1\n");
  const auto bad = write_file("bad.json", R"({"kind": "tabulated", "file": "bad.csv"})");
  CHECK(run({"moments", "--spec", bad.string()}).code == 2);
  CHECK_THROWS_AS(read_density_csv(scratch() / "bad.csv"), Error);
}

TEST_CASE("cli_deterministic_and_formats_agree") {
  const auto spec = write_file("pl.json", R"({"kind": "power_law", "gamma": 1.0, "exponent": 3.5})");
  const std::vector<std::string> base = {"composite", "--spec", spec.string(), "--t-max", "3", "--grid", "40"};
  const Run a = run(base);
  const Run b = run(base);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const Run j = run(json_args);
  REQUIRE(j.code == 0);
  const auto records = nlohmann::json::parse(j.out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  const auto columns = split(line);
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const auto row = split(line);
    for (std::size_t k = 0; k < 3; ++k) {
      const double csv = std::stod(row[k]);
      const double js = records[i][columns[k]].get<double>();
      CHECK(std::abs(csv - js) <= 1e-15 * std::max(1.0, std::abs(csv)));
    }
    CHECK(records[i]["lower_source"] == row[3]);
    ++i;
  }
  CHECK(i == records.size());
}

TEST_CASE("cli_other_commands") {
  const auto sq = write_file("sq.json", R"({"kind": "square", "m": 1})");
  CHECK(run({"bounds", "--spec", sq.string(), "--t-max", "2", "--grid", "16"}).code == 0);
  CHECK(run({"bounds", "--spec", sq.string(), "--cutoff", "0.5", "--order", "2,4"}).code == 0);
  CHECK(run({"bounds", "--spec", sq.string(), "--target", "ri", "--order", "1,2,3,4"}).code == 0);
  const Run env = run({"envelope", "--spec", sq.string(), "--order", "2", "--c-grid", "32"});
  REQUIRE(env.code == 0);
  CHECK(env.out.rfind("c,t,value,order,direction,n_roots\n", 0) == 0);
  const auto three = write_file("three.json", R"({"kind": "discrete", "atoms": [[0, 0.7], [0.5, 0.2], [1, 0.1]]})");
  CHECK(run({"envelope", "--spec", three.string(), "--order", "2"}).code == 0);
  const auto bw = write_file("bw2.json", R"({"kind": "breit_wigner", "gamma": 1.0})");
  const Run nobounds = run({"bounds", "--spec", bw.string()});
  CHECK(nobounds.code == 3);
}

TEST_CASE("cli_tolerance_override") {
  const auto sq = write_file("sq.json", R"({"kind": "square", "m": 1})");
  setenv("SURVBOUND_TOL", "banana", 1);
  CHECK(run({"exact", "--spec", sq.string()}).code == 2);
  setenv("SURVBOUND_TOL", "1e-11", 1);
  CHECK(run({"exact", "--spec", sq.string()}).code == 0);
  unsetenv("SURVBOUND_TOL");
}

TEST_CASE("cli_figure_files") {
  const fs::path dir = scratch() / "fig";
  const Run r = run({"figure", "fig2", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "fig2.csv"));
  CHECK(fs::exists(dir / "fig2_manifest.json"));
  const auto manifest = nlohmann::json::parse(std::ifstream(dir / "fig2_manifest.json"));
  CHECK(manifest["series"].size() == 3);
}
