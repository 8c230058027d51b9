// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// lomq command line.
//
//   lomq analyze <config> [--naive]
//   lomq sweep <config> --param /junctions/0/L_j --values 10e-9,11e-9,12e-9
//   lomq budget <config>
//   lomq modes <line.json>
//
// --format table|machine selects human tables or one JSON document.
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lomq/error.hpp"
#include "lomq/io/config.hpp"
#include "lomq/io/driver.hpp"
#include "lomq/io/report.hpp"

namespace {

constexpr int kInvalidInput = 2;
constexpr int kNumericalFailure = 3;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lomq::Error(lomq::ErrorCode::ConfigError, path + ": cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw lomq::Error(lomq::ErrorCode::ConfigError, path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dressed parameters of transmons coupled to loaded transmission lines"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "table";
  bool naive = false;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "machine"}))
      ->capture_default_str();
  app.add_flag("--naive", naive, "Also run the conventional approximations and compare");

  std::string config_path;
  auto* analyze = app.add_subcommand("analyze", "Full device analysis");
  analyze->add_option("config", config_path, "Device configuration (JSON)")->required();

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Vary one configuration value");
  sweep->add_option("config", config_path, "Device configuration (JSON)")->required();
  sweep->add_option("--param", param, "JSON pointer into the configuration")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

  auto* budget = app.add_subcommand("budget", "Sensitivity of chi_qr to model features");
  budget->add_option("config", config_path, "Device configuration (JSON)")->required();

  std::string line_path;
  auto* modes = app.add_subcommand("modes", "Solve a single loaded line");
  modes->add_option("line", line_path, "Line description (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  const bool machine = format == "machine";
  try {
    std::string text;
    if (analyze->parsed()) {
      const auto report = lomq::io::run_analysis(lomq::io::load_config(config_path), naive);
      text = machine ? lomq::io::render_machine(lomq::io::to_json(report)) : lomq::io::to_table(report);
    } else if (sweep->parsed()) {
      const auto result = lomq::io::run_sweep(lomq::io::load_config(config_path), param, values, naive);
      text = machine ? lomq::io::render_machine(lomq::io::to_json(result)) : lomq::io::to_table(result);
    } else if (budget->parsed()) {
      const auto table = lomq::io::run_budget(lomq::io::load_config(config_path));
      text = machine ? lomq::io::render_machine(lomq::io::to_json(table)) : lomq::io::to_table(table);
    } else if (modes->parsed()) {
      const auto report = lomq::io::run_modes(read_json(line_path));
      text = machine ? lomq::io::render_machine(lomq::io::to_json(report)) : lomq::io::to_table(report);
    }
    std::cout << text;
    return 0;
  } catch (const lomq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lomq::is_numerical(e.code()) ? kNumericalFailure : kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: ConfigError: " << e.what() << "\n";
    return kInvalidInput;
  }
}
