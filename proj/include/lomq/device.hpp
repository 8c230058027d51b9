// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Device-level pipeline: compose cells, reduce, quantize every declared
// subsystem with its dressed parameters, couple and diagonalize.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lomq/hamiltonian.hpp"
#include "lomq/loaded_line.hpp"
#include "lomq/netlist.hpp"
#include "lomq/subsystems.hpp"

namespace lomq {

struct TransmonDeclaration {
  std::string name;
  std::vector<std::string> nodes;
  std::string junction;  // its flux is the transmon coordinate
  double charge_offset = 0.0;
  int charge_cutoff = 30;
  int levels = 5;
};

/// A line loaded at one or two port nodes. With two ports, the port with the
/// larger dressed capacitance is the loaded end z = 0 and the other sits at z = L.
struct LineDeclaration {
  std::string name;
  std::vector<std::string> nodes;
  double impedance = 50.0;      // ohm
  double phase_velocity = 0.0;  // m/s
  Termination termination = Termination::Open;
  std::optional<double> length;            // m
  std::optional<double> target_frequency;  // Hz, used when length is absent
  std::optional<int> target_mode;          // defaults to the first dynamical mode
  int mode_count = 1;
  int levels = 5;
  std::optional<int> harmonic_levels;  // levels of modes above the fundamental
};

using SubsystemDeclaration = std::variant<TransmonDeclaration, LineDeclaration>;

const std::string& declaration_name(const SubsystemDeclaration& d);
const std::vector<std::string>& declaration_nodes(const SubsystemDeclaration& d);

struct DeviceModel {
  std::string datum;
  std::vector<CellMatrices> cells;
  std::vector<JunctionElement> junctions;
  std::vector<SubsystemDeclaration> subsystems;
  std::vector<std::string> couplers;

  NodeRegistry registry() const;
  std::optional<std::size_t> subsystem_index(const std::string& name) const;
  const JunctionElement& junction(const std::string& name) const;
  /// Copy with one junction's bias-point inductance replaced; E_J follows.
  DeviceModel with_junction_inductance(const std::string& name, double inductance) const;
};

enum class CouplingScope { All, QubitOnly };

struct AnalysisOptions {
  std::string qubit;    // transmon subsystem name
  std::string readout;  // line subsystem name
  CouplingScope scope = CouplingScope::All;
  std::vector<std::pair<std::string, std::string>> disabled_pairs;
  std::size_t max_dimension = kDefaultMaxDimension;
};

struct TransmonReport {
  std::string name;
  std::string junction;
  double capacitance = 0.0;       // C_J^eff
  double charging_energy = 0.0;   // J
  double josephson_energy = 0.0;  // J
  double inductance = 0.0;        // H
  double bare_frequency = 0.0;    // Hz
  double bare_anharmonicity = 0.0;  // Hz
};

struct LineReport {
  std::string name;
  std::string load_port;
  double load_capacitance = 0.0;  // C_L^eff used for the modes
  std::optional<std::string> far_port;
  double far_capacitance = 0.0;
  LoadedLineSpec spec;
  std::vector<LineMode> modes;
  double unloaded_fundamental = 0.0;  // rad/s, same length with C_L = 0
};

/// g for one factor pair: hbar g = A B / C_nm^eff. The Hamiltonian carries
/// (hbar g / 2) A (x) B for each such pair.
struct CouplingRate {
  std::string factor_a;
  std::string factor_b;
  double rate = 0.0;  // rad/s
};

struct CouplingReport {
  std::string subsystem_a;
  std::string subsystem_b;
  std::string port_a;
  std::string port_b;
  double inverse_capacitance = 0.0;
  double inverse_inductance = 0.0;
  std::vector<CouplingRate> rates;
};

struct AnalysisResult {
  bool naive = false;
  ReducedCircuit reduced;
  std::vector<TransmonReport> transmons;
  std::vector<LineReport> lines;
  std::vector<CouplingReport> couplings;
  std::vector<QuantizedSubsystem> quantized;
  CouplingGraph graph;
  std::size_t dimension = 0;
  DressedSpectrum spectrum;
  DispersiveObservables observables;
  std::vector<std::string> warnings;
};

/// Throws the errors of the underlying stages; Unsupported when a transmon
/// block is not a single junction coordinate or a line port carries inductance.
AnalysisResult analyze(const DeviceModel& model, const AnalysisOptions& options);

/// Conventional approximations for comparison: each line is an unloaded line
/// whose fundamental matches the dressed one, transmon capacitance [C_k]_JJ and
/// first-order couplings 1/C_nm^eff = -2 [C_k]_nm / ([C_k]_nn [C_k]_mm). Line
/// ports couple through C_port V with C_port = [C_k]_pp.
AnalysisResult analyze_naive(const DeviceModel& model, const AnalysisOptions& options);

struct JunctionCalibration {
  double inductance = 0.0;
  int evaluations = 0;
  AnalysisResult result;
};

/// Solves f_q(L_j) = target over [lower, upper]. Throws TargetOutOfRange when
/// the endpoints do not bracket the target or f_q is not decreasing.
JunctionCalibration calibrate_junction(const DeviceModel& model, const AnalysisOptions& options,
                                       const std::string& junction, double target_frequency, double lower,
                                       double upper);

}  // namespace lomq
