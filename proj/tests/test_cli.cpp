// Copyright 2026 The sepulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kConfig = fs::path(SEPULSE_SOURCE_DIR) / "data" / "shared_line.json";

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sepulse_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + SEPULSE_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string base() const { return "--config \"" + kConfig.string() + "\" --out \"" + (dir_ / "out").string() + "\" "; }

  fs::path dir_;
};

void expect_one_error_line(const Outcome& r, const std::string& kind) {
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  EXPECT_EQ(r.err.rfind("sepulse: error: " + kind + ":", 0), 0u) << r.err;
}

}  // namespace

TEST_F(Cli, HelpSucceeds) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("synthesize"), std::string::npos);
  EXPECT_NE(r.out.find("drag-scan"), std::string::npos);
}

TEST_F(Cli, SynthesizeWritesWaveformAndSidecar) {
  const auto r = run(base() + "synthesize --target Q1 --family sep-sym");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir_ / "out" / "waveform_Q1_sep-sym.csv");
  EXPECT_EQ(csv.rfind("t_ns,s_x,s_y\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 81);
  const auto side = json::parse(slurp(dir_ / "out" / "waveform_Q1_sep-sym.json"));
  EXPECT_EQ(side["samples"], 80);
  EXPECT_NEAR(side["area"][0].get<double>(), 3.14159265358979 / 2, 1e-9);

  const auto again = run(base() + "synthesize --target Q1 --family sep-sym");
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(slurp(dir_ / "out" / "waveform_Q1_sep-sym.csv"), csv);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "waveform_Q1_sep-sym.csv.tmp"));
}

TEST_F(Cli, SweepWritesGrid) {
  const auto r = run(base() + "sweep --family sep-asym --t-points 3 --delta-points 4");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir_ / "out" / "sweep_sep-asym.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
  EXPECT_EQ(json::parse(slurp(dir_ / "out" / "sweep_sep-asym.json"))["cols"], 4);
}

TEST_F(Cli, CalibrationRecordFeedsRabi) {
  ASSERT_EQ(run(base() + "calibrate --target Q1 --family gaussian --no-delta").code, 0);
  const auto record = dir_ / "out" / "calibration_Q1_gaussian.json";
  ASSERT_TRUE(fs::exists(record));
  const auto r = run(base() + "rabi --target Q1 --family gaussian --n-max 4 --calibration \"" + record.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir_ / "out" / "rabi_Q1_gaussian.csv");
  EXPECT_EQ(csv.rfind("n,Pg_Q0,Pg_Q1,Pg_Q2\n0,1,1,1\n", 0), 0u) << csv;
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  for (const std::string args : {"", "frobnicate", "synthesize", "synthesize --target Q1 --bogus 3",
                                 "--seed notanumber synthesize --target Q1"}) {
    const auto r = run(base() + args);
    EXPECT_EQ(r.code, 2) << args;
    expect_one_error_line(r, "ConfigError");
  }
}

TEST_F(Cli, ConfigurationErrorsExitWithTwo) {
  auto r = run("--config \"" + (dir_ / "missing.json").string() + "\" synthesize --target Q1");
  EXPECT_EQ(r.code, 2);
  expect_one_error_line(r, "ConfigError");

  std::ofstream(dir_ / "bad.json") << R"({"qubits": [{"label": "A"}]})";
  r = run("--config \"" + (dir_ / "bad.json").string() + "\" synthesize --target A");
  EXPECT_EQ(r.code, 2);
  expect_one_error_line(r, "ConfigError");
  EXPECT_NE(r.err.find("qubits[0].frequency_Hz"), std::string::npos);

  r = run(base() + "synthesize --target Q7");
  EXPECT_EQ(r.code, 2);
  expect_one_error_line(r, "ConfigError");

  r = run(base() + "sweep --t-min 50 --t-max 20");
  EXPECT_EQ(r.code, 2);
  expect_one_error_line(r, "ConfigError");

  r = run(base() + "synthesize --target Q1 --sigma-mhz 0");
  EXPECT_EQ(r.code, 2);
  expect_one_error_line(r, "InvalidWidth");
}

TEST_F(Cli, NumericalFailuresExitWithThree) {
  std::ofstream(dir_ / "nocoh.json") << R"({"qubits": [{"label": "A", "frequency_Hz": 5e9},
                                                        {"label": "B", "frequency_Hz": 5.05e9}]})";
  const auto r = run("--config \"" + (dir_ / "nocoh.json").string() + "\" --out \"" + (dir_ / "o").string() +
                     "\" rb --target A --family gaussian --seeds 2 --lengths 1,2,4");
  EXPECT_EQ(r.code, 3);
  expect_one_error_line(r, "MissingCoherence");
}
