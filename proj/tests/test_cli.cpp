#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "moebius/cli_app.hpp"

using namespace moebius;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = std::string("/tmp/moebius_cli_") + name;
  std::ofstream f(path);
  f << text;
  return path;
}

}  // namespace

TEST_CASE("solve command emits the exact parameter triple") {
  auto r = cli({"params", "solve", "--m", "1,1,1", "--r-sq", "3,1,2"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["exact"] == true);
  CHECK(j["params"]["lambda"][0].get<double>() ==
        doctest::Approx(-19.0 / 108.0).epsilon(1e-15));
  CHECK(j["params"]["lambda"][1].get<double>() ==
        doctest::Approx(29.0 / 108.0).epsilon(1e-15));
  CHECK(j["params"]["lambda"][2].get<double>() ==
        doctest::Approx(11.0 / 108.0).epsilon(1e-15));
  for (const auto& [name, flag] : j["exact_zero"].items()) {
    INFO("identity ", name);
    CHECK(flag == true);
  }
  CHECK(j["residuals"].size() == 12);
}

TEST_CASE("solve falls back to floating point on non-decimal input") {
  auto r = cli({"params", "solve", "--m", "1,1,1", "--r-sq", "3,1,2e0"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["exact"] == false);
  CHECK_FALSE(j.contains("exact_zero"));
  for (const auto& [name, resid] : j["residuals"].items()) {
    INFO("identity ", name);
    CHECK(resid.get<double>() < 1e-12);
  }
}

TEST_CASE("b0 command inverts the eigenvalue triple") {
  auto r = cli({"params", "b0", "--m", "1,1,1", "--lambda", "-0.25,0.25,0.25"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["b0"][0].get<double>()) < 1e-14);
  CHECK(j["b0"][1].get<double>() > 0.7);
  CHECK(j["b0"][2].get<double>() < -0.7);
}

TEST_CASE("missing required options name the flag and the config key") {
  auto r = cli({"params", "solve", "--m", "1,1,1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--r-sq") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("malformed values exit with the configuration code") {
  CHECK(cli({"params", "solve", "--m", "1,1", "--r-sq", "3,1,2"}).code == 2);
  CHECK(cli({"params", "solve", "--m", "1,1,x", "--r-sq", "3,1,2"}).code == 2);
  CHECK(cli({"scan", "feasibility", "--m", "1,1,3", "--p", "0,0,1", "--blocks",
             "geodesic-hyperbolic,geodesic-sphere,banana"})
            .code == 2);
  CHECK(cli({"verify", "structure", "--family", "clifford", "--order", "0"}).code ==
        2);
  CHECK(cli({"invariants", "--family", "clifford", "--format", "xml"}).code == 2);
}

TEST_CASE("infeasible mathematics exits with the failure code, not the config code") {
  auto r = cli({"params", "solve", "--m", "1,1,1", "--r-sq", "1,3,2"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("unknown flags and missing subcommands are usage errors") {
  CHECK(cli({"params", "solve", "--wat", "1"}).code == 2);
  CHECK(cli({"params"}).code == 2);
  CHECK(cli({}).code == 2);
  auto help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Usage") != std::string::npos);
}

TEST_CASE("config file fills options and flags override it") {
  auto path = write_temp("solve.json", R"({"m": "1,1,1", "r_sq": "2,1,1"})");
  auto from_cfg = cli({"params", "solve", "--config", path});
  REQUIRE(from_cfg.code == 0);
  auto j = nlohmann::json::parse(from_cfg.out);
  CHECK(j["params"]["r_sq"][0].get<double>() == 2.0);

  auto overridden = cli({"params", "solve", "--config", path, "--r-sq", "3,1,2"});
  REQUIRE(overridden.code == 0);
  auto k = nlohmann::json::parse(overridden.out);
  CHECK(k["params"]["r_sq"][0].get<double>() == 3.0);
  std::remove(path.c_str());
}

TEST_CASE("config files with unknown keys are rejected by name") {
  auto path = write_temp("unknown.json",
                         R"({"m": "1,1,1", "r_sq": "3,1,2", "wat": 1})");
  auto r = cli({"params", "solve", "--config", path});
  CHECK(r.code == 2);
  CHECK(r.err.find("wat") != std::string::npos);
  CHECK(r.err.find("params solve") != std::string::npos);
  std::remove(path.c_str());

  auto badtype = write_temp("badtype.json", R"({"m": 7})");
  auto t = cli({"params", "solve", "--config", badtype, "--r-sq", "3,1,2"});
  CHECK(t.code == 2);
  CHECK(t.err.find("\"m\"") != std::string::npos);
  std::remove(badtype.c_str());

  CHECK(cli({"params", "solve", "--config", "/tmp/does_not_exist_477.json"}).code ==
        2);
}

TEST_CASE("scan command reports the torus-block root") {
  auto r = cli({"scan", "feasibility", "--m", "1,1,3", "--p", "0,0,1", "--blocks",
                "geodesic-hyperbolic,geodesic-sphere,clifford"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["count"].get<int>() == 1);
  CHECK(j["results"][0]["r_sq"][2].get<double>() ==
        doctest::Approx(8.868051263561057).epsilon(1e-6));

  // an empty result is still a clean exit
  auto empty = cli({"scan", "feasibility", "--m", "1,1,1", "--p", "0,0,0",
                    "--blocks",
                    "geodesic-hyperbolic,geodesic-sphere,geodesic-sphere"});
  CHECK(empty.code == 0);
  CHECK(nlohmann::json::parse(empty.out)["count"].get<int>() == 0);
}

TEST_CASE("verification commands map pass and fail onto exit codes") {
  auto good = cli({"verify", "structure", "--family", "clifford", "--samples", "3"});
  CHECK(good.code == 0);
  CHECK(nlohmann::json::parse(good.out)["pass"] == true);

  // incompatible block curvatures: report printed, exit 1
  auto bad = cli({"verify", "ls", "--m", "1,1,3", "--p", "0,0,1", "--r-sq",
                  "10,2,8", "--blocks",
                  "geodesic-hyperbolic,geodesic-sphere,clifford", "--samples", "2"});
  CHECK(bad.code == 1);
  auto j = nlohmann::json::parse(bad.out);
  CHECK(j["pass"] == false);
  CHECK(j["verdicts"]["blocks_compatible"] == false);
}

TEST_CASE("invariant tables stream to stdout and to a file") {
  auto r = cli({"invariants", "--family", "clifford", "--samples", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("sample,u1,u2,rho,", 0) == 0);

  std::string path = "/tmp/moebius_cli_table.json";
  auto w = cli({"invariants", "--family", "clifford", "--samples", "2", "--format",
                "json", "--output", path});
  REQUIRE(w.code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto tab = nlohmann::json::parse(ss.str());
  CHECK(tab["rows"].size() == 2);
  CHECK(tab["columns"][3] == "rho");
  std::remove(path.c_str());
}

TEST_CASE("coordinate maps run from the command line") {
  auto s = cli({"map", "sigma", "--point", "0.3,0.4"});
  REQUIRE(s.code == 0);
  auto j = nlohmann::json::parse(s.out);
  CHECK(j["output"][0].get<double>() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(std::abs(j["norm_check"].get<double>()) < 1e-15);

  auto t = cli({"map", "tau", "--point", "1.25,0.5,0.25,0.5"});
  REQUIRE(t.code == 0);
  auto k = nlohmann::json::parse(t.out);
  CHECK(k["output"][0].get<double>() == doctest::Approx(0.8).epsilon(1e-14));

  CHECK(cli({"map", "tau", "--point", "1,5"}).code == 1);
  CHECK(cli({"map", "sigma", "--point", ""}).code == 2);
}
