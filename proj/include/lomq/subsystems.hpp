// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Isolated quantization of subsystem building blocks. A subsystem is a list
// of tensor factors (one per transmon or per line mode), each diagonal in its
// own eigenbasis, plus the port operators that couple it to the rest.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lomq/loaded_line.hpp"

namespace lomq {

using ComplexMatrix = Eigen::MatrixXcd;

struct TransmonSpec {
  double capacitance = 0.0;       // C_J^eff, F
  double josephson_energy = 0.0;  // J
  double charge_offset = 0.0;     // Q_ofs, C
  int charge_cutoff = 30;         // n in [-n_max, n_max]
  int levels = 5;

  /// E_C = e^2 / 2C.
  double charging_energy() const;
  /// n_g = Q_ofs / 2e.
  double offset_charge_number() const;
  /// Throws ConfigError.
  void validate() const;
};

struct TransmonSolution {
  Eigen::VectorXd energies;      // lowest `levels` eigenvalues, J
  Eigen::MatrixXd charge_number;  // n in the eigenbasis
  Eigen::MatrixXd eigenvectors;   // charge basis, columns
  int charge_cutoff = 0;
};

/// Exact charge-basis diagonalization at the cutoff in `spec`, no convergence test.
TransmonSolution solve_transmon(const TransmonSpec& spec);

enum class SubsystemKind { Transmon, Line };

struct ModeFactor {
  std::string label;
  Eigen::VectorXd energies;  // J, ascending
  double omega = 0.0;        // harmonic factors only
};

/// scale * (dimensionless matrix) acting on one factor of the subsystem.
struct OperatorTerm {
  std::size_t factor = 0;
  double scale = 0.0;
  ComplexMatrix matrix;  // physical operator (C or Wb), Hermitian
};

struct PortOperators {
  std::string port;  // reduced-circuit coordinate label
  std::vector<OperatorTerm> charge;
  std::vector<OperatorTerm> flux;
};

struct QuantizedSubsystem {
  std::size_t index = 0;
  std::string name;
  SubsystemKind kind = SubsystemKind::Transmon;
  std::vector<ModeFactor> factors;
  std::vector<PortOperators> ports;

  const PortOperators* find_port(std::string_view port) const;
};

inline constexpr double kTransmonConvergence = 1e-10;

/// Lowest levels and 2e n in the eigenbasis. Throws TruncationNotConverged
/// when doubling the charge cutoff moves E01 by more than kTransmonConvergence.
QuantizedSubsystem diagonalize_transmon(const TransmonSpec& spec, std::string name = "transmon",
                                        std::string port = "J");

/// Truncated annihilation operator.
Eigen::MatrixXd annihilation(int levels);
/// i * zpf * (a^dag - a).
ComplexMatrix harmonic_charge(int levels, double zpf);
/// zpf * (a + a^dag).
ComplexMatrix harmonic_flux(int levels, double zpf);
/// hbar w (n + 1/2), n < levels.
ModeFactor harmonic_mode(std::string label, double omega, int levels);

enum class LineEnd { Load, Far };

struct LinePort {
  std::string name;
  LineEnd end = LineEnd::Load;
  /// Port charge is capacitance * V at the port. Zero at the loaded end
  /// means the load itself, i.e. Q_ZPF(0).
  double capacitance = 0.0;
};

/// One harmonic factor per mode. Each port's charge operator is the sum of
/// per-mode terms; load ports use Q_ZPF(0), far ports C_port w Phi_ZPF(L).
QuantizedSubsystem quantize_line(const LoadedLineSpec& spec, std::span<const LineMode> modes, int levels,
                                 std::span<const LinePort> ports, std::string name = "line");
/// Per-mode truncation, one entry per mode.
QuantizedSubsystem quantize_line(const LoadedLineSpec& spec, std::span<const LineMode> modes,
                                 std::span<const int> levels, std::span<const LinePort> ports,
                                 std::string name = "line");

/// A term divided by its scale: n for a transmon, i(a^dag - a) for a mode.
struct ScaledTerm {
  std::size_t factor = 0;
  double scale = 0.0;
  ComplexMatrix matrix;
};

struct ScaledPort {
  std::string port;
  std::vector<ScaledTerm> charge;
};

std::vector<ScaledPort> scale_operators(const QuantizedSubsystem& subsystem);

/// hbar g = A B / C_eff, with inverse_capacitance = 1 / C_eff.
inline double coupling_energy(double a, double b, double inverse_capacitance) {
  return a * b * inverse_capacitance;
}

}  // namespace lomq
