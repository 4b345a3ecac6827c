/*
 Copyright 2026 The hovi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hovi/cli.hpp"
#include "hovi/error.hpp"

using namespace hovi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome hovic(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json last_json(const std::string& text) {
  const size_t end = text.find_last_not_of('\n');
  const size_t start = text.rfind('\n', end);
  return nlohmann::json::parse(text.substr(start == std::string::npos ? 0 : start + 1));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hovic_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, ListParsing) {
  EXPECT_EQ(cli::parse_int_list("8, 16,32"), (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(cli::parse_double_list("0.5,1e-1"), (std::vector<double>{0.5, 0.1}));
  EXPECT_THROW(cli::parse_int_list("8,x"), Error);
  EXPECT_THROW(cli::parse_double_list("1.0abc"), Error);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(hovic({}).code, cli::kUsage);
  EXPECT_EQ(hovic({"no-such-command"}).code, cli::kUsage);
  EXPECT_EQ(hovic({"verlet-check", "--samples", "abc"}).code, cli::kUsage);
  EXPECT_EQ(hovic({"hager-experiment", "--variant", "c9t9"}).code, cli::kUsage);
  EXPECT_EQ(hovic({"solve-ocp", "--model", "pendulum"}).code, cli::kUsage);
}

TEST(Cli, HelpDocumentsSchema) {
  const Outcome r = hovic({"verlet-check", "--help"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("sample,q0,p0,sg_dev,sprk_dev"), std::string::npos);
}

TEST(Cli, VerletCheckPasses) {
  const Outcome r = hovic({"verlet-check", "--samples", "20", "--seed", "5"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = last_json(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["schema"], "hovic.verlet-check/1");
  EXPECT_LE(j["max_dev"].get<double>(), 1e-12);
  EXPECT_EQ(r.out.rfind("sample,q0,p0,sg_dev,sprk_dev\n", 0), 0u);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"order-study", "--model", "harmonic", "--h-list",
                                      "0.4,0.2,0.1", "--jobs", "2"};
  const Outcome a = hovic(args), b = hovic(args);
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(last_json(a.out).count("wall_time_s"), 0u);
  const Outcome timed = hovic({"verlet-check", "--samples", "3", "--timing"});
  EXPECT_EQ(last_json(timed.out).count("wall_time_s"), 1u);
}

TEST(Cli, ConfigFileAndOverride) {
  const fs::path cfg = scratch("verlet.cfg");
  std::ofstream(cfg) << "# comment\nsamples = 4\nseed=9\n";
  const Outcome a = hovic({"verlet-check", "--config", cfg.string()});
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(last_json(a.out)["config"]["samples"], 4);
  const Outcome b = hovic({"verlet-check", "--config", cfg.string(), "--samples", "6"});
  ASSERT_EQ(b.code, cli::kOk) << b.err;
  EXPECT_EQ(last_json(b.out)["config"]["samples"], 6);
  EXPECT_EQ(last_json(b.out)["config"]["seed"], 9);

  std::ofstream(cfg) << "samples\n";
  EXPECT_EQ(hovic({"verlet-check", "--config", cfg.string()}).code, cli::kUsage);
  EXPECT_EQ(hovic({"verlet-check", "--config", scratch("missing.cfg").string()}).code,
            cli::kUsage);
}

TEST(Cli, OutWritesCsvAndJson) {
  const fs::path csv = scratch("coeff.csv");
  fs::remove(csv);
  fs::remove(scratch("coeff.json"));
  const Outcome r = hovic({"coefficients", "--family", "lobatto", "--stages", "2,3", "--out",
                       csv.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream c(csv);
  std::string header;
  std::getline(c, header);
  EXPECT_EQ(header, "family,s,table,i,j,value");
  std::ifstream j(scratch("coeff.json"));
  const auto summary = nlohmann::json::parse(j);
  EXPECT_TRUE(summary["pass"].get<bool>());
}

TEST(Cli, ExpectedFailureExitCodes) {
  EXPECT_EQ(hovic({"solve-ocp", "--variant", "c3t1", "--N", "4"}).code, cli::kExpectedFailure);
  EXPECT_EQ(hovic({"hager-experiment", "--variant", "c3t1", "--N-list", "4,8"}).code,
            cli::kExpectedFailure);
  const Outcome ok = hovic({"solve-ocp", "--variant", "c3t3", "--N", "4"});
  ASSERT_EQ(ok.code, cli::kOk) << ok.err;
  EXPECT_EQ(last_json(ok.out)["status"], "ok");
}

TEST(Cli, CommutationCheck) {
  const Outcome r = hovic({"commutation-check", "--N-list", "4,8"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(last_json(r.out)["pass"].get<bool>());
  EXPECT_EQ(hovic({"commutation-check", "--scheme", "sprk", "--N-list", "4"}).code,
            cli::kUsage);
}

TEST(Cli, BadLogLevel) {
  setenv("HOVIC_LOG", "loud", 1);
  const Outcome r = hovic({"verlet-check", "--samples", "2"});
  unsetenv("HOVIC_LOG");
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("HOVIC_LOG"), std::string::npos);
}
