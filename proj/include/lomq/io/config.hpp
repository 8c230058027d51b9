// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// JSON device configuration. Paths inside the document are relative to the
// configuration file's directory. Schema (keys marked ? are optional):
//
//   datum                  datum node name
//   merge_ground_nets?     default true; ground_nets are merged into datum
//   ground_nets?           [names]
//   couplers               [node names eliminated during reduction]
//   capacitance_scale?     multiplies every cell matrix, default 1
//   cells                  [{name, maxwell: path, nodes?: [names]}]
//   junctions              [{name, n1, n2, L_j | E_J, C_j?, kind?, flux_bias?, subsystem}]
//   inductors?/capacitors? [{name, n1, n2, L | C}]
//   subsystems             [{name, kind: transmon | loaded_line, nodes, ...}]
//   analysis?              {qubit, readout, scope?, max_dimension?, epsilon_r?,
//                           calibrate_junction?: {junction, target_frequency, bounds}}

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lomq/device.hpp"

namespace lomq::io {

struct InputDigest {
  std::string path;  // as written in the document
  std::string sha256;
};

struct CalibrationRequest {
  std::string junction;
  double target_frequency = 0.0;  // Hz
  double lower = 0.0;             // H
  double upper = 0.0;             // H
};

struct DeviceConfig {
  nlohmann::json document;
  std::filesystem::path base_directory;
  DeviceModel model;
  AnalysisOptions options;
  std::optional<CalibrationRequest> calibration;
  double epsilon_r = 11.45;
  std::optional<InputDigest> source;  // the configuration file itself
  std::vector<InputDigest> inputs;    // referenced Maxwell files
  std::vector<std::string> warnings;
};

/// Throws ConfigError with the offending JSON path, or the Maxwell parse errors.
DeviceConfig load_config(const std::filesystem::path& path);
DeviceConfig build_config(const nlohmann::json& document, const std::filesystem::path& base_directory,
                          std::optional<InputDigest> source = std::nullopt);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace lomq::io
