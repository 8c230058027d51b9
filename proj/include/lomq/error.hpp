// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lomq {

enum class ErrorCode {
  // Input and validation failures.
  UnknownDatum,
  UnknownNode,
  MalformedMatrix,
  DimensionMismatch,
  InvalidPartition,
  DependentJunctionLoop,
  ParseError,
  AsymmetryError,
  SignError,
  ConfigError,
  Unsupported,
  // Numerical failures.
  NonNullDirection,
  SingularCouplerBlock,
  InvalidTarget,
  TruncationNotConverged,
  DimensionOverflow,
  UnlabeledState,
  TargetOutOfRange,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownDatum: return "UnknownDatum";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::MalformedMatrix: return "MalformedMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::DependentJunctionLoop: return "DependentJunctionLoop";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AsymmetryError: return "AsymmetryError";
    case ErrorCode::SignError: return "SignError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NonNullDirection: return "NonNullDirection";
    case ErrorCode::SingularCouplerBlock: return "SingularCouplerBlock";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::UnlabeledState: return "UnlabeledState";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
  }
  return "Unknown";
}

/// Numerical failures map to CLI exit code 3, everything else to 2.
constexpr bool is_numerical(ErrorCode code) {
  return code >= ErrorCode::NonNullDirection;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lomq
