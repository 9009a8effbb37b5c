// Copyright 2026 The invforge Authors
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

#include "invforge/cli.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace invforge;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "invforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("invforge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("INVFORGE_CAL");
  }
  void TearDown() override {
    unsetenv("INVFORGE_CAL");
    fs::remove_all(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string data(const std::string& name) const { return std::string(INVFORGE_DATA_DIR) + "/" + name; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, synth_is_deterministic) {
  const Result a = run_cli({"synth", "--name", "crz-folding", "--n-folds", "6", "--seed", "3"});
  const Result b = run_cli({"synth", "--name", "crz-folding", "--n-folds", "6", "--seed", "3"});
  const Result c = run_cli({"synth", "--name", "crz-folding", "--n-folds", "6", "--seed", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(circuit_from_json(json::parse(a.out)).n_qubits, 2U);
}

TEST_F(CliTest, synth_from_spec_and_csv) {
  const Result r = run_cli({"synth", "--spec", data("qaoa-maxcut-4q.json"), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("index,kind", 0), 0U) << r.out.substr(0, 40);
}

TEST_F(CliTest, compile_then_simulate_without_noise_is_exact) {
  ASSERT_EQ(run_cli({"synth", "--spec", data("heisenberg-6q.json"), "--out", path("logical.json")}).code, 0);
  const Result c = run_cli({"compile", "--circuit", path("logical.json"), "--hidden-inverse", "false", "--out",
                            path("basis.json")});
  ASSERT_EQ(c.code, 0) << c.err;
  const Result s = run_cli({"simulate", "--circuit", path("basis.json"), "--reference", path("logical.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NEAR(json::parse(s.out).at("fidelity").get<double>(), 1.0, 1e-9);
  EXPECT_TRUE(fs::exists(path("basis.json.manifest.json")));
}

TEST_F(CliTest, pulses_then_simulate_from_schedules) {
  ASSERT_EQ(run_cli({"synth", "--spec", data("crz-folding.json"), "--out", path("logical.json")}).code, 0);
  ASSERT_EQ(run_cli({"compile", "--circuit", path("logical.json"), "--out", path("basis.json")}).code, 0);
  const Result p = run_cli({"pulses", "--circuit", path("basis.json"), "--out", path("sched.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  const json sched = json::parse(slurp(path("sched.json")));
  EXPECT_FALSE(sched.at("schedules").empty());
  const Result s = run_cli({"simulate", "--schedules", path("sched.json"), "--reference", path("logical.json"),
                            "--noise", "fixed"});
  ASSERT_EQ(s.code, 0) << s.err;
  const double f = json::parse(s.out).at("fidelity").get<double>();
  EXPECT_GT(f, 0.9);
  EXPECT_LE(f, 1.0);
  const Result csv = run_cli({"pulses", "--circuit", path("basis.json"), "--format", "csv"});
  EXPECT_EQ(csv.out.rfind("schedule,gate,channel", 0), 0U);
}

TEST_F(CliTest, bench_manifest_replay_is_byte_identical) {
  const Result a = run_cli({"bench", "--suite", "crz-folding", "--seed", "5", "--draws", "2", "--format", "csv",
                            "--out", path("a.csv")});
  ASSERT_EQ(a.code, 0) << a.err;
  const json manifest = json::parse(slurp(path("a.csv.manifest.json")));
  EXPECT_EQ(manifest.at("subcommand"), "bench");
  EXPECT_EQ(manifest.at("version"), kVersion);
  EXPECT_EQ(manifest.at("config").at("seed"), 5);
  const Result b =
      run_cli({"bench", "--manifest", path("a.csv.manifest.json"), "--out", path("b.csv")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.csv")).rfind("name,n_qubits,F_std,F_hi,improvement,seeds\n", 0), 0U);
  EXPECT_EQ(manifest.at("config").at("noise"), "default");
  const Report direct = run_suite(crz_folding_suite({4, 8, 16, 32}, 5), CoherentNoiseModel::sampled_default(5),
                                  PassConfig{}, default_calibration(), 2);
  EXPECT_EQ(slurp(path("a.csv")), report_to_csv(direct));
  EXPECT_LT(direct.rows.back().f_std, 0.5);
}

TEST_F(CliTest, bench_emits_gnuplot_files) {
  const Result r = run_cli({"bench", "--spec", data("qaoa-maxcut-4q.json"), "--seed", "1", "--draws", "1",
                            "--emit-gnuplot", path("plot")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(path("plot.dat")).find("qaoa-maxcut-4q"), std::string::npos);
  EXPECT_NE(slurp(path("plot.gp")).find("plot.png"), std::string::npos);
  EXPECT_EQ(json::parse(r.out).at("rows").size(), 1U);
}

TEST_F(CliTest, calibration_env_override) {
  json cal = json::parse(default_calibration_json());
  cal["kappa"]["D"] = 0.08;
  std::ofstream(path("bad_cal.json")) << cal.dump();
  ASSERT_EQ(run_cli({"synth", "--name", "crz-folding", "--n-folds", "2", "--out", path("c.json")}).code, 0);
  ASSERT_EQ(run_cli({"compile", "--circuit", path("c.json"), "--out", path("b.json")}).code, 0);

  EXPECT_EQ(run_cli({"pulses", "--circuit", path("b.json")}).code, 0);
  setenv("INVFORGE_CAL", path("bad_cal.json").c_str(), 1);
  const Result bad = run_cli({"pulses", "--circuit", path("b.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("deviates"), std::string::npos) << bad.err;
  EXPECT_EQ(run_cli({"pulses", "--circuit", path("b.json"), "--cal", data("calibration_default.json")}).code, 0);
  setenv("INVFORGE_CAL", path("missing.json").c_str(), 1);
  EXPECT_EQ(run_cli({"pulses", "--circuit", path("b.json")}).code, 4);
}

TEST_F(CliTest, exit_codes) {
  EXPECT_EQ(run_cli({"bench", "--suite", "standard"}).code, 2);
  EXPECT_EQ(run_cli({"compile", "--circuit", path("nope.json")}).code, 4);
  EXPECT_EQ(run_cli({"synth", "--name", "qaoa-maxcut", "--n-qubits", "1"}).code, 2);
  EXPECT_EQ(run_cli({"synth", "--name", "qaoa-maxcut", "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);

  std::ofstream(path("logical.json")) << R"({"n_qubits": 2, "gates": [{"kind": "h", "qubits": [0]}]})";
  EXPECT_EQ(run_cli({"simulate", "--circuit", path("logical.json")}).code, 2);
  std::ofstream(path("wide.json")) << R"({"n_qubits": 25, "gates": []})";
  EXPECT_EQ(run_cli({"compile", "--circuit", path("wide.json")}).code, 3);
  std::ofstream(path("garbage.json")) << "{not json";
  EXPECT_EQ(run_cli({"compile", "--circuit", path("garbage.json")}).code, 2);
  EXPECT_EQ(run_cli({"synth", "--name", "qpe", "--out", path("no/such/dir/x.json")}).code, 4);
}

TEST_F(CliTest, binary_reports_exit_codes) {
  const std::string bin = INVFORGE_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > " + path("stdout.txt") + " 2> " + path("stderr.txt")).c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("synth --name qpe --n-qubits 5"), 0);
  EXPECT_NE(slurp(path("stdout.txt")).find("\"n_qubits\""), std::string::npos);
  EXPECT_EQ(status("bench --suite standard"), 2);
  EXPECT_EQ(status("compile --circuit " + path("absent.json")), 4);
}
