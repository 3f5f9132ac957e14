// Copyright 2026 The levyot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "levyot/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace levyot::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("levyot_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, DistReportsDistance) {
  const auto a = Write("a.json", R"({"dim": 1, "atoms": [{"z": [0.5], "w": 1}]})");
  const auto b = Write("b.json", R"({"dim": 1, "atoms": [{"z": [0.5], "w": 2}]})");
  const auto r = Invoke({"dist", a, b, "--p", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::parse(r.out, "stdout");
  // The extra unit of mass comes from the reservoir at cost |0.5|.
  EXPECT_NEAR(j.at("distance").get<double>(), 0.5, 1e-15);
  EXPECT_EQ(j.at("gap").get<double>(), 0.0);
  EXPECT_TRUE(j.contains("plan"));
  EXPECT_TRUE(j.contains("duals"));

  const auto same = io::parse(Invoke({"dist", a, a, "--p", "2"}).out, "stdout");
  EXPECT_EQ(same.at("distance").get<double>(), 0.0);

  const auto csv = Invoke({"dist", a, b, "--p", "1", "--csv"});
  EXPECT_EQ(csv.out.rfind("p,value,distance", 0), 0u);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  const auto good = Write("good.json", R"({"dim": 1, "atoms": [{"z": [0.5], "w": 1}]})");
  const auto bad = Write("bad.json", "{\"dim\": 1,\n  \"atoms\": [}");
  auto r = Invoke({"dist", bad, good});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.json:2:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("malformed JSON"), std::string::npos);

  const auto negative = Write("neg.json", R"({"dim": 1, "atoms": [{"z": [0.5], "w": -1}]})");
  r = Invoke({"dist", negative, good});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("atoms[0].w"), std::string::npos) << r.err;

  const auto plane = Write("plane.json", R"({"dim": 2, "atoms": [{"z": [0.5, 0], "w": 1}]})");
  EXPECT_EQ(Invoke({"dist", plane, good}).code, 2);
  EXPECT_EQ(Invoke({"dist", good, good, "--p", "0.5"}).code, 2);
  EXPECT_EQ(Invoke({"dist", good}).code, 2);
  EXPECT_EQ(Invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(Invoke({"dist", (dir_ / "missing.json").string(), good}).code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(Invoke({"--help"}).code, 0);
  for (const char* cmd :
       {"dist", "dual", "bounds", "sweep", "convolve", "doubling", "experiment", "verify"}) {
    const auto r = Invoke({cmd, "--help"});
    EXPECT_EQ(r.code, 0) << cmd;
    EXPECT_NE(r.out.find("--json"), std::string::npos) << cmd;
    EXPECT_NE(r.out.find("--csv"), std::string::npos) << cmd;
  }
}

TEST_F(CliTest, DualChecksFeasibility) {
  const auto a = Write("a.json", R"({"dim": 1, "atoms": [{"z": [0.5], "w": 1}]})");
  const auto b = Write("b.json", R"({"dim": 1, "atoms": [{"z": [-0.5], "w": 1}]})");
  auto r = Invoke({"dual", a, b, "--p", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = io::parse(r.out, "stdout");
  EXPECT_TRUE(j.at("feasible").get<bool>());
  EXPECT_NEAR(j.at("dual_value").get<double>(), 0.5, 1e-15);

  // phi = 0.25 = |x|^2 and psi = 0.25 are tight on the reservoir: value 0.5.
  const auto tight = Write("tight.json", R"({"phi": [0.25], "psi": [0.25]})");
  j = io::parse(Invoke({"dual", a, b, "--duals", tight}).out, "stdout");
  EXPECT_NEAR(j.at("dual_value").get<double>(), 0.5, 1e-15);
  const auto over = Write("over.json", R"({"phi": [0.3], "psi": [0.25]})");
  r = Invoke({"dual", a, b, "--duals", over});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(io::parse(r.out, "stdout").at("feasible").get<bool>());
  const auto shape = Write("shape.json", R"({"phi": [0.1, 0.2], "psi": [0.25]})");
  EXPECT_EQ(Invoke({"dual", a, b, "--duals", shape}).code, 2);
}

TEST_F(CliTest, BoundsCsv) {
  const auto a = Write("a.json", R"({"dim": 1, "atoms": [{"z": [0.5], "w": 1}, {"z": [-0.2], "w": 2}]})");
  const auto b = Write("b.json", R"({"dim": 1, "atoms": [{"z": [0.4], "w": 1.5}]})");
  const auto r = Invoke({"bounds", a, b, "--p", "1.5", "--r", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "bound_name,lhs,rhs,slack,pass");
  std::vector<std::string> names;
  while (std::getline(lines, line)) {
    names.push_back(line.substr(0, line.find(',')));
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "true") << line;
  }
  EXPECT_EQ(names, (std::vector<std::string>{"tv_power", "positive_part_dual", "restriction",
                                             "pushforward", "restricted_integral"}));
  const auto outside = Write("out.json", R"({"dim": 1, "atoms": [{"z": [1.5], "w": 1}]})");
  EXPECT_EQ(Invoke({"bounds", outside, b}).code, 2);
}

TEST_F(CliTest, SweepConstantFamilyAndDeterminism) {
  const auto cfg = Write("k.json", R"({"type": "kernel", "sigma": 0.5,
      "params": {"c0": 1.0, "c1": 0.0},
      "grid": {"r_min": 0.01, "n_radial": 20, "n_angular": 1}})");
  auto r = Invoke({"sweep", cfg, "--pairs", "5", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "# seed=3 p=1 s=1");
  std::getline(lines, line);
  EXPECT_EQ(line, "x,y,|x-y|,distance,ratio,truncation_cost");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells[4], "0");
  }
  EXPECT_EQ(rows, 5);
  EXPECT_NE(r.err.find("max_ratio=0"), std::string::npos);

  const auto varying = Write("v.json", R"({"type": "fraclap", "sigma": 1.5,
      "params": {"base": 0.5, "amp": 0.25}, "grid": {"n_radial": 30, "n_angular": 1}})");
  const auto first = Invoke({"sweep", varying, "--pairs", "6", "--seed", "11", "--p", "1.75"});
  const auto second = Invoke({"sweep", varying, "--pairs", "6", "--seed", "11", "--p", "1.75"});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, second.out);
  EXPECT_NE(first.out, Invoke({"sweep", varying, "--pairs", "6", "--seed", "12", "--p", "1.75"}).out);

  r = Invoke({"sweep", cfg, "--pairs", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# seed=0 p=1 s=1\nx,y,|x-y|,distance,ratio,truncation_cost\n");

  const auto out = (dir_ / "sweep.csv").string();
  EXPECT_EQ(Invoke({"sweep", cfg, "--pairs", "2", "--out", out}).code, 0);
  EXPECT_TRUE(fs::exists(out));
}

TEST_F(CliTest, SweepConfigErrors) {
  EXPECT_EQ(Invoke({"sweep", Write("a.json", R"({"type": "heat"})")}).code, 2);
  EXPECT_EQ(Invoke({"sweep", Write("b.json", R"({"sigma": 0.5})")}).code, 2);
  EXPECT_EQ(Invoke({"sweep", Write("c.json", R"({"type": "fraclap", "sigma": 0.5})")}).code, 2);
  EXPECT_EQ(Invoke({"sweep", Write("d.json", R"({"type": "kernel", "grid": {"r_min": -1}})")}).code, 2);
  EXPECT_EQ(Invoke({"sweep", Write("e.json", R"({"type": "kernel", "part": "middle"})")}).code, 2);
  EXPECT_EQ(Invoke({"sweep", Write("f.json", R"({"type": "levyito", "params": {}})")}).code, 2);
}

TEST_F(CliTest, ConvolveAndDoubling) {
  const auto u = Write("u.json", R"({"lo": [0], "hi": [1], "shape": [3], "values": [0, 1, 0]})");
  auto r = Invoke({"convolve", u, "--delta", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = io::parse(r.out, "stdout");
  // max_y u(y) - |x - y|^2: the peak at 0.5 reaches the ends as 1 - 0.25.
  EXPECT_EQ(j.at("values"), (io::Json{0.75, 1.0, 0.75}));
  EXPECT_EQ(j.at("argmax"), (io::Json{1, 1, 1}));
  j = io::parse(Invoke({"convolve", u, "--delta", "1", "--inf"}).out, "stdout");
  EXPECT_EQ(j.at("values"), (io::Json{0.0, 0.25, 0.0}));
  EXPECT_EQ(Invoke({"convolve", u, "--delta", "0"}).code, 2);
  const auto ragged = Write("r.json", R"({"lo": [0], "hi": [1], "shape": [3], "values": [0, 1]})");
  EXPECT_EQ(Invoke({"convolve", ragged}).code, 2);

  const auto zero = Write("z.json", R"({"lo": [0], "hi": [1], "shape": [3], "values": [0, 0, 0]})");
  r = Invoke({"doubling", u, zero, "--epsilon", "0.1", "--p", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  j = io::parse(r.out, "stdout");
  EXPECT_EQ(j.at("i").get<int>(), 1);
  EXPECT_EQ(j.at("j").get<int>(), 1);
  EXPECT_EQ(j.at("value").get<double>(), 1.0);

  const auto mu = Write("mu.json", R"({"dim": 1, "atoms": [{"z": [0.5], "w": 1}]})");
  r = Invoke({"doubling", u, zero, "--mu", mu, "--nu", mu});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(io::parse(r.out, "stdout").at("coupling").at("pass").get<bool>());
  EXPECT_EQ(Invoke({"doubling", u, zero, "--mu", mu}).code, 2);
}

TEST_F(CliTest, ExperimentReport) {
  const auto r = Invoke({"experiment", "--nodes", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::parse(r.out, "stdout");
  ASSERT_EQ(j.at("rows").size(), 4u);
  for (const char* key :
       {"epsilon", "kappa", "x_star", "y_star", "gap", "penalty_term", "distance_term"}) {
    EXPECT_TRUE(j.at("rows")[0].contains(key)) << key;
  }
  EXPECT_TRUE(j.at("u_below_v").get<bool>());
  EXPECT_EQ(Invoke({"experiment", "--nodes", "4"}).code, 2);
}

TEST_F(CliTest, VerifySuites) {
  auto r = Invoke({"verify", "--suite", "metric", "--n", "30", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("# suite=metric seed=7 instances=30\n", 0), 0u);
  EXPECT_EQ(r.out, Invoke({"verify", "--suite", "metric", "--n", "30", "--seed", "7"}).out);
  EXPECT_EQ(Invoke({"verify", "--suite", "oracle", "--n", "20"}).code, 0);
  EXPECT_EQ(Invoke({"verify", "--suite", "unknown"}).code, 2);
  EXPECT_EQ(Invoke({"verify", "--suite", "metric", "--tol", "triangle"}).code, 2);
  EXPECT_EQ(Invoke({"verify", "--suite", "metric", "--tol", "speed=1"}).code, 2);
  EXPECT_EQ(Invoke({"verify"}).code, 2);
  const auto j = io::parse(Invoke({"verify", "--suite", "bounds", "--n", "6", "--json"}).out, "stdout");
  EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST_F(CliTest, FailureWritesReplayableReproducer) {
  // Zero tolerance fails wherever solver and enumeration round differently.
  auto r = Invoke({"verify", "--suite", "oracle", "--n", "30", "--tol", "oracle=0",
                "--repro-dir", dir_.string()});
  ASSERT_EQ(r.code, 1) << r.out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir_)) files.push_back(e.path());
  ASSERT_EQ(files.size(), 1u) << r.err;
  const auto repro = io::load(files[0].string());
  EXPECT_EQ(repro.at("suite"), "oracle");
  EXPECT_EQ(repro.at("tolerances").at("oracle").get<double>(), 0.0);

  r = Invoke({"verify", "--replay", files[0].string()});
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_NE(r.out.find("oracle_equivalence,FAIL"), std::string::npos) << r.out;
  // Restoring the default tolerance makes the same instance pass.
  r = Invoke({"verify", "--replay", files[0].string(), "--tol", "oracle=1e-10"});
  EXPECT_EQ(r.code, 0) << r.out;

  auto tampered = repro;
  tampered["data"]["p"] = 7.0;
  const auto bad = Write("tampered.json", io::dump(tampered));
  EXPECT_EQ(Invoke({"verify", "--replay", bad}).code, 2);
}

}  // namespace
}  // namespace levyot::cli
