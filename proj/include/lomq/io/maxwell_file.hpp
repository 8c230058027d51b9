// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Delimited-text Maxwell matrix files:
//
//   # units: fF
//   # source: extractor v2
//   node,G,P0,P1
//   G,125,-60,-60
//   P0,-60,85,-20
//   P1,-60,-20,85      <- rows in header order
//
// Values keep their file units in `raw` so a canonical file serializes back
// byte for byte.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lomq/netlist.hpp"

namespace lomq::io {

enum class CapacitanceUnit { Femtofarad, Picofarad, Farad };

std::string_view unit_name(CapacitanceUnit unit);
double unit_scale(CapacitanceUnit unit);

/// Symmetry within this relative tolerance is accepted as is.
inline constexpr double kExactSymmetry = 1e-12;
/// Asymmetry below this relative level is averaged away with a warning.
inline constexpr double kRepairableAsymmetry = 1e-6;

struct MaxwellFile {
  std::vector<std::pair<std::string, std::string>> headers;  // file order, includes units
  CapacitanceUnit unit = CapacitanceUnit::Femtofarad;
  std::vector<std::string> nodes;
  Matrix raw;  // file units
  std::vector<std::string> warnings;

  /// SI matrix.
  MaxwellMatrix matrix() const;
};

/// Throws ParseError (with line:column), AsymmetryError, SignError or MalformedMatrix.
MaxwellFile parse_maxwell(std::string_view text, std::string_view source = "<input>");
MaxwellFile read_maxwell_file(const std::filesystem::path& path);

/// Canonical text: headers, node line, rows; shortest round-trip numbers.
std::string serialize_maxwell(const MaxwellFile& file);

/// Wraps an SI matrix for serialization in the given unit.
MaxwellFile make_maxwell_file(const MaxwellMatrix& m, CapacitanceUnit unit,
                              std::vector<std::pair<std::string, std::string>> extra_headers = {});

}  // namespace lomq::io
