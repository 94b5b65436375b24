#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CHIRALRBM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "chiralrbm_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("nonsense") == 1);
  CHECK(run("sample --model banana") == 1);
  CHECK(run("decay-scan -n 4,7 --samples 30") == 1);
  CHECK(run("green --model chiral -n 5 -W 2 --z 0,0") == 2);
  CHECK(run("fmc-scan -n 5 --model chiral --z 0,0") == 1);
  CHECK(run("fmc-scan -n 4") == 1);  // no z
  CHECK(run("scaling-fit -W 2,4 --mu 0.1,0.05") == 1);
  CHECK(run("green --z nope") == 1);
}

TEST_CASE("sample writes a loadable JSON container") {
  const auto out = scratch() / "sample.json";
  REQUIRE(run("sample --model full -n 3 -W 2 --seed 5 --format json --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["format"] == "chiralrbm.block_tridiagonal");
  CHECK(j["n"] == 3);
  CHECK(j["V"].size() == 3);
  CHECK(j["T"].size() == 2);
  CHECK(j["T"][0].size() == 8);
  CHECK(j["meta"]["seed"] == 5);
}

TEST_CASE("green prints the W x W block") {
  const auto out = scratch() / "green.csv";
  REQUIRE(run("green --model chiral -n 4 -W 2 --seed 1 --out " + out.string()) == 0);
  const auto text = slurp(out);
  CHECK(text.rfind("x,y,z_re,z_im,i,j,re,im,norm\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("json output mirrors columns and carries meta") {
  const auto out = scratch() / "lyap.json";
  REQUIRE(run("lyapunov -W 2 --steps 500 --format json --timestamp T0 --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["columns"]["k"].size() == 2);
  CHECK(j["columns"].contains("newman_value"));
  CHECK(j["meta"]["timestamp"] == "T0");
  CHECK(j["meta"]["subcommand"] == "lyapunov");
  CHECK(j["meta"]["config"]["steps"] == 500);
}

TEST_CASE("scaling-fit reads a decay-scan summary") {
  const auto cells = scratch() / "cells.csv";
  const auto fits = scratch() / "fits.csv";
  const auto fit = scratch() / "fit.csv";
  REQUIRE(run("decay-scan -W 1,2,4 -n 8,16,32,48,64 --samples 40 --out " + cells.string() +
              " --summary " + fits.string()) == 0);
  REQUIRE(run("scaling-fit --from " + fits.string() + " --out " + fit.string()) == 0);
  CHECK(slurp(fit).rfind("points,alpha", 0) == 0);
  REQUIRE(run("scaling-fit -W 2,4,8,16 --oracle newman --out " + fit.string()) == 0);
}

TEST_CASE("fmc-scan writes raw samples") {
  const auto out = scratch() / "fmc.csv";
  const auto raw = scratch() / "raw.csv";
  REQUIRE(run("fmc-scan -W 2 -n 4 --z 0,1 --z 0.5,0.5 --s 0.3 --s 0.6 --samples 10 --out " +
              out.string() + " --raw " + raw.string()) == 0);
  const auto text = slurp(raw);
  CHECK(text.rfind("sample_index,n,W,z_re,z_im,s,log_norm,failed\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 2 * 10);
}
