// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

const std::filesystem::path kFixtures = LOMQ_FIXTURES;

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string command = std::string(LOMQ_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

class TempFile {
 public:
  explicit TempFile(const std::string& text)
      : path_(std::filesystem::temp_directory_path() / ("lomq_cli_" + std::to_string(counter_++) + ".json")) {
    std::ofstream(path_) << text;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

TEST(Cli, AnalyzeMachineOutputIsStableJson) {
  const CliRun a = run("--format machine analyze " + fixture("pair.json"));
  ASSERT_EQ(a.status, 0);
  const auto doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["kind"], "analysis");
  EXPECT_LT(doc["full"]["observables"]["chi_qr"]["value"].get<double>(), 0.0);
  EXPECT_EQ(run("--format machine analyze " + fixture("pair.json")).out, a.out);
}

TEST(Cli, NaiveFlagAddsComparison) {
  const CliRun a = run("analyze " + fixture("pair.json") + " --naive --format machine");
  ASSERT_EQ(a.status, 0);
  EXPECT_TRUE(nlohmann::json::parse(a.out).contains("naive"));
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("analyze " + fixture("does_not_exist.json")).status, 2);
  TempFile broken("{\"datum\": ");
  EXPECT_EQ(run("analyze " + broken.path()).status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("--format xml analyze " + fixture("pair.json")).status, 2);
}

TEST(Cli, NumericalFailureExitsThree) {
  std::ifstream in(kFixtures / "pair.json");
  auto doc = nlohmann::json::parse(in);
  doc["cells"][0]["maxwell"] = fixture("pair_cell.csv");
  // No junction inductance in the bounds reaches 40 GHz.
  doc["analysis"]["calibrate_junction"] = {{"junction", "J"}, {"target_frequency", 40e9}, {"bounds", {9e-9, 18e-9}}};
  TempFile config(doc.dump());
  EXPECT_EQ(run("analyze " + config.path()).status, 3);
}

TEST(Cli, HelpExitsZero) {
  const CliRun r = run("--help");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("analyze"), std::string::npos);
}

TEST(Cli, SweepMachineOutput) {
  const CliRun r = run("--format machine sweep " + fixture("pair.json") + " --param /junctions/0/L_j --values 10e-9,13e-9,16e-9");
  ASSERT_EQ(r.status, 0);
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["points"].size(), 3u);
  double previous = INFINITY;
  for (const auto& p : doc["points"]) {
    const double f = p["full"]["observables"]["qubit_frequency"]["value"];
    EXPECT_LT(f, previous);
    previous = f;
  }
}

TEST(Cli, ModesTable) {
  const CliRun r = run("modes " + fixture("readout_line.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_FALSE(r.out.empty());
}

}  // namespace
