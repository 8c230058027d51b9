// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Analysis, sweep and budget drivers on top of a DeviceConfig.
//
// Every driver resolves the configuration to a nominal document: the
// requested junction calibration is run and written back as L_j, and lines
// given by target frequency are frozen at their calibrated length.
//
// Sweeps vary the nominal document, so a swept parameter moves the
// frequencies. Budget rows vary the original document and resolve each row
// again, so every row describes a device matching the same measured qubit
// and line frequencies.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lomq/device.hpp"
#include "lomq/io/config.hpp"

namespace lomq::io {

struct CalibrationOutcome {
  std::string junction;
  double target_frequency = 0.0;  // Hz
  double inductance = 0.0;        // H
  int evaluations = 0;
};

struct Provenance {
  std::string version;
  std::optional<InputDigest> source;
  std::vector<InputDigest> inputs;
  std::string effective_config_sha256;  // of the resolved nominal document
};

struct AnalysisReport {
  AnalysisResult full;
  std::optional<AnalysisResult> naive;
  std::optional<CalibrationOutcome> calibration;
  std::vector<std::string> warnings;
  Provenance provenance;
};

struct NominalConfig {
  DeviceConfig config;  // document has no calibration request or target frequencies
  std::optional<CalibrationOutcome> calibration;
};

NominalConfig resolve_nominal(const DeviceConfig& config);

AnalysisReport run_analysis(const DeviceConfig& config, bool include_naive = false);

struct SweepPoint {
  double value = 0.0;
  AnalysisReport report;
};

struct SweepResult {
  std::string parameter;  // JSON pointer into the nominal document
  std::vector<SweepPoint> points;
  Provenance provenance;
};

/// Points run concurrently and come back in the order of `values`.
SweepResult run_sweep(const DeviceConfig& config, const std::string& pointer, const std::vector<double>& values,
                      bool include_naive = false);

struct BudgetRow {
  std::string parameter;
  std::string variation;
  double chi_qr = 0.0;         // Hz
  double delta_percent = 0.0;  // relative to the nominal full model
};

struct BudgetTable {
  double nominal_chi_qr = 0.0;  // Hz
  std::vector<BudgetRow> rows;
  std::vector<std::string> warnings;
  Provenance provenance;
};

BudgetTable run_budget(const DeviceConfig& config);

// Stand-alone line solutions for the `modes` command. Document keys:
//   impedance + (phase_velocity | phase_velocity_fraction), or
//   capacitance_per_length + inductance_per_length;
//   load_capacitance (F), termination, length | target_frequency (+ target_mode),
//   mode_count (default 3), samples (default 101).
struct LineModesReport {
  LoadedLineSpec spec;
  ModeSet modes;
  ModeSet unloaded;  // same length, C_L = 0
  std::vector<double> positions;                      // m
  std::vector<std::vector<double>> fields;            // per mode, u_m(z)
  std::vector<std::vector<double>> charge_densities;  // per mode, q_ZPF(z) in C/m
  std::vector<double> curve_omega;                    // rad/s
  std::vector<double> curve_loaded;                   // characteristic left side
  std::vector<double> curve_unloaded;
};

LineModesReport run_modes(const nlohmann::json& document);

}  // namespace lomq::io
