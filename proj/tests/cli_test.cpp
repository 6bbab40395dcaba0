#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcrowds/metrics.hpp"
#include "mcrowds/trace.hpp"
#include "mcrowds/verify.hpp"

using namespace mcrowds;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome mcrowds_cli(const std::string& args) {
  const std::string cmd = std::string(MCROWDS_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) o.out.append(buf.data(), n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mcrowds_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunFig2WithMetricSnapshots) {
  const Outcome o =
      mcrowds_cli("run --preset fig2_hetero --ticks 1500 --seed 7 --metrics-at 150,450,1500 --out " + dir_.string());
  ASSERT_EQ(o.code, 0);
  const auto csv = lines_of(dir_ / "metrics.csv");
  ASSERT_EQ(csv.size(), 7u);  // header + 3 ticks x 2 groups
  EXPECT_EQ(csv[0], kMetricsCsvHeader);
  EXPECT_EQ(csv[1].rfind("150,E1.0,25,", 0), 0u);
  EXPECT_EQ(csv[2].rfind("150,E0.8,25,", 0), 0u);
  EXPECT_EQ(csv[3].rfind("450,", 0), 0u);
  EXPECT_EQ(csv[6].rfind("1500,E0.8,", 0), 0u);
  EXPECT_EQ(read_trajectories((dir_ / "trajectory.jsonl").string()).size(), 1501u);
}

TEST_F(Cli, ZeroTicksWritesInitialStateOnly) {
  ASSERT_EQ(mcrowds_cli("run --preset fig2_hetero --ticks 0 --out " + dir_.string()).code, 0);
  EXPECT_EQ(lines_of(dir_ / "trajectory.jsonl").size(), 2u);
  const auto csv = lines_of(dir_ / "metrics.csv");
  ASSERT_EQ(csv.size(), 3u);
  EXPECT_EQ(csv[1].rfind("0,E1.0,", 0), 0u);
}

TEST_F(Cli, HashIsStable) {
  const std::string args = "run --preset scenario2 --ticks 200 --hash --out " + dir_.string();
  const Outcome a = mcrowds_cli(args);
  const Outcome b = mcrowds_cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out.size(), 65u);  // 64 hex digits + newline
  EXPECT_EQ(a.out, b.out);
  const Outcome c = mcrowds_cli("run --preset scenario2 --ticks 200 --seed 99 --hash --out " + dir_.string());
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, TraceRunMatchesServedReplay) {
  const InputTrace trace = scripted_trace(preset("scenario2"), 150);
  const fs::path tp = dir_ / "trace.jsonl";
  std::ofstream(tp) << render_trace(trace);
  const Outcome headless = mcrowds_cli("run --trace " + tp.string() + " --hash --out " + dir_.string());
  const Outcome served = mcrowds_cli("serve --replay " + tp.string() + " --hash");
  ASSERT_EQ(headless.code, 0);
  ASSERT_EQ(served.code, 0);
  EXPECT_EQ(headless.out, served.out);
}

TEST_F(Cli, ConfigFile) {
  ScenarioConfig c = preset("fig5_biocrowds");
  c.spawn_groups[0].count = 5;
  const fs::path cp = dir_ / "scenario.json";
  std::ofstream(cp) << render_config(c);
  ASSERT_EQ(mcrowds_cli("run --config " + cp.string() + " --ticks 10 --out " + dir_.string()).code, 0);
  const auto frames = read_trajectories((dir_ / "trajectory.jsonl").string());
  ASSERT_EQ(frames.size(), 11u);
  EXPECT_EQ(frames[0].agents.size(), 5u);
}

TEST_F(Cli, EnvironmentSetsOutputDirectory) {
  const std::string cmd = "MARKER_CROWDS_OUT=" + dir_.string() + " " + MCROWDS_CLI_PATH +
                          " run --preset fig5_biocrowds --ticks 1 2>/dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "trajectory.jsonl"));
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(mcrowds_cli("").code, 2);
  EXPECT_EQ(mcrowds_cli("fly").code, 2);
  EXPECT_EQ(mcrowds_cli("run").code, 2);
  EXPECT_EQ(mcrowds_cli("run --preset nowhere").code, 2);
  EXPECT_EQ(mcrowds_cli("run --preset fig2_hetero --config x.json").code, 2);
  EXPECT_EQ(mcrowds_cli("run --preset fig2_hetero --ticks 10 --metrics-at 11 --out " + dir_.string()).code, 2);
  EXPECT_EQ(mcrowds_cli("run --preset fig2_hetero --ticks abc").code, 2);
  EXPECT_EQ(mcrowds_cli("verify --seeds 0").code, 2);
  EXPECT_EQ(mcrowds_cli("serve --preset fig2_hetero --bind 127.0.0.1:0").code, 2);
}

TEST_F(Cli, RuntimeErrorsExitOne) {
  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << R"({"world":{"min":[0,0],"max":[5,5]},"goals":[[1,1]],"spawn_groups":[]})";
  EXPECT_EQ(mcrowds_cli("run --config " + bad.string() + " --out " + dir_.string()).code, 1);
}

TEST_F(Cli, VerifySingleSeed) {
  const auto t0 = std::chrono::steady_clock::now();
  const Outcome o = mcrowds_cli("verify --seeds 1");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("all checks passed"), std::string::npos);
  EXPECT_LT(secs, 10.0);
}
