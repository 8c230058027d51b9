// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Transmission line capacitively loaded at z = 0 and open or shorted at z = L.
// Eigenfrequencies solve
//
//   w L / v_p + atan(w / w_L) = m pi + b pi / 2,   w_L = 1 / (C_L Z0),
//
// and the flux eigenfield is u(z) = cos(k z + phi), phi = atan(w / w_L).

#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace lomq {

enum class Termination { Open = 0, Short = 1 };

struct LoadedLineSpec {
  double length = 0.0;                  // m
  double capacitance_per_length = 0.0;  // F/m
  double inductance_per_length = 0.0;   // H/m
  double load_capacitance = 0.0;        // F
  Termination termination = Termination::Open;

  static LoadedLineSpec from_per_length(double length, double c, double l, double load_capacitance,
                                        Termination termination = Termination::Open);
  /// Per-length constants from Z0 = sqrt(l/c) and v_p = 1/sqrt(lc).
  static LoadedLineSpec from_impedance(double length, double impedance, double phase_velocity,
                                       double load_capacitance, Termination termination = Termination::Open);

  double phase_velocity() const;
  double impedance() const;
  /// w_L = 1/(C_L Z0); +infinity for an unloaded line.
  double knee_frequency() const;
  /// b in the characteristic equation.
  int termination_index() const { return static_cast<int>(termination); }
  /// Index of the lowest dynamical mode: 1 for an open end, 0 for a short.
  int first_mode() const { return termination == Termination::Open ? 1 : 0; }

  LoadedLineSpec with_length(double value) const;
  LoadedLineSpec with_load(double value) const;

  /// Throws ConfigError.
  void validate() const;
};

struct LineMode {
  int index = 0;
  double omega = 0.0;       // rad/s
  double wavenumber = 0.0;  // rad/m
  double phase = 0.0;       // rad
  double load_participation = 0.0;
  double load_charge_zpf = 0.0;  // C

  double field(double z) const;
};

struct ModeSet {
  std::optional<LineMode> dc_mode;  // open termination only; never quantized
  std::vector<LineMode> modes;
};

/// Left-hand side of the characteristic equation.
double characteristic_lhs(const LoadedLineSpec& spec, double omega);
/// |lhs - (m pi + b pi/2)| / (m pi + b pi/2).
double characteristic_residual(const LoadedLineSpec& spec, double omega, int m);

/// Root of branch m by bisection in its guaranteed bracket plus Newton polish.
double solve_mode_frequency(const LoadedLineSpec& spec, int m);

/// Lowest `count` dynamical modes, with EPR and load charge ZPF filled in.
ModeSet solve_modes(const LoadedLineSpec& spec, int count);

/// Builds a mode record for branch m.
LineMode make_mode(const LoadedLineSpec& spec, int m);

/// Closed form of int_0^L u(z)^2 dz.
double field_norm_integral(const LoadedLineSpec& spec, const LineMode& mode);

/// Fraction of the mode's capacitive energy stored in the load.
double epr_loading(const LoadedLineSpec& spec, const LineMode& mode);
/// Energy-fraction density along the line, so that p_L + int p_c dz = 1.
double epr_density(const LoadedLineSpec& spec, const LineMode& mode, double z);

struct ZeroPointFluctuations {
  double load_charge = 0.0;                     // Q_ZPF(0), C
  std::function<double(double)> charge_density;  // q_ZPF(z), C/m
  std::function<double(double)> flux;            // Phi_ZPF(z), Wb
};

ZeroPointFluctuations zpf(const LoadedLineSpec& spec, const LineMode& mode);

/// Length that makes `omega` the m-th eigenfrequency. The length stored in
/// `spec` is ignored. Throws InvalidTarget when no positive length exists.
double calibrate_length(double omega, int m, const LoadedLineSpec& spec);

}  // namespace lomq
