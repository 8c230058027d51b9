// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/loaded_line.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"

namespace lomq {
namespace {

constexpr double kPi = std::numbers::pi;

double branch_target(const LoadedLineSpec& spec, int m) {
  return m * kPi + spec.termination_index() * kPi / 2.0;
}

// atan(w / w_L) written to stay exact for C_L = 0 (w_L infinite).
double load_phase(const LoadedLineSpec& spec, double omega) {
  if (spec.load_capacitance == 0.0) return 0.0;
  return std::atan(omega * spec.load_capacitance * spec.impedance());
}

}  // namespace

LoadedLineSpec LoadedLineSpec::from_per_length(double length, double c, double l, double load_capacitance,
                                               Termination termination) {
  LoadedLineSpec spec{length, c, l, load_capacitance, termination};
  spec.validate();
  return spec;
}

LoadedLineSpec LoadedLineSpec::from_impedance(double length, double impedance, double phase_velocity,
                                              double load_capacitance, Termination termination) {
  if (!(impedance > 0) || !(phase_velocity > 0)) {
    throw Error(ErrorCode::ConfigError, "line impedance and phase velocity must be positive");
  }
  return from_per_length(length, 1.0 / (impedance * phase_velocity), impedance / phase_velocity,
                         load_capacitance, termination);
}

double LoadedLineSpec::phase_velocity() const {
  return 1.0 / std::sqrt(inductance_per_length * capacitance_per_length);
}

double LoadedLineSpec::impedance() const { return std::sqrt(inductance_per_length / capacitance_per_length); }

double LoadedLineSpec::knee_frequency() const {
  if (load_capacitance == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (load_capacitance * impedance());
}

LoadedLineSpec LoadedLineSpec::with_length(double value) const {
  LoadedLineSpec out = *this;
  out.length = value;
  return out;
}

LoadedLineSpec LoadedLineSpec::with_load(double value) const {
  LoadedLineSpec out = *this;
  out.load_capacitance = value;
  return out;
}

void LoadedLineSpec::validate() const {
  if (!(length > 0) || !(capacitance_per_length > 0) || !(inductance_per_length > 0)) {
    throw Error(ErrorCode::ConfigError, "line length, c and l must be positive");
  }
  if (!(load_capacitance >= 0) || !std::isfinite(load_capacitance)) {
    throw Error(ErrorCode::ConfigError, "loading capacitance must be finite and non-negative");
  }
}

double LineMode::field(double z) const { return std::cos(wavenumber * z + phase); }

double characteristic_lhs(const LoadedLineSpec& spec, double omega) {
  return omega * spec.length / spec.phase_velocity() + load_phase(spec, omega);
}

double characteristic_residual(const LoadedLineSpec& spec, double omega, int m) {
  const double target = branch_target(spec, m);
  return std::abs(characteristic_lhs(spec, omega) - target) / target;
}

double solve_mode_frequency(const LoadedLineSpec& spec, int m) {
  spec.validate();
  const double target = branch_target(spec, m);
  if (!(target > 0)) return 0.0;  // open-end d.c. solution
  const double v = spec.phase_velocity();
  if (spec.load_capacitance == 0.0) return target * v / spec.length;

  double lo = std::max(0.0, (target - kPi / 2.0) * v / spec.length);
  double hi = target * v / spec.length;
  auto f = [&](double w) { return characteristic_lhs(spec, w) - target; };
  while ((hi - lo) > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0) lo = mid;
    else hi = mid;
  }
  double w = 0.5 * (lo + hi);
  const double knee = spec.knee_frequency();
  for (int step = 0; step < 2; ++step) {
    const double slope = spec.length / v + knee / (knee * knee + w * w);
    const double next = w - f(w) / slope;
    if (next > lo && next < hi) w = next;
  }
  return w;
}

double field_norm_integral(const LoadedLineSpec& spec, const LineMode& mode) {
  const double l = spec.length;
  const double k = mode.wavenumber;
  if (k == 0.0) return l * std::cos(mode.phase) * std::cos(mode.phase);
  return l / 2.0 + (std::sin(2.0 * (k * l + mode.phase)) - std::sin(2.0 * mode.phase)) / (4.0 * k);
}

namespace {

double capacitive_norm(const LoadedLineSpec& spec, const LineMode& mode) {
  const double u0 = mode.field(0.0);
  return spec.load_capacitance * u0 * u0 + spec.capacitance_per_length * field_norm_integral(spec, mode);
}

}  // namespace

double epr_loading(const LoadedLineSpec& spec, const LineMode& mode) {
  if (spec.load_capacitance == 0.0) return 0.0;
  const double u0 = mode.field(0.0);
  return spec.load_capacitance * u0 * u0 / capacitive_norm(spec, mode);
}

double epr_density(const LoadedLineSpec& spec, const LineMode& mode, double z) {
  const double u = mode.field(z);
  return spec.capacitance_per_length * u * u / capacitive_norm(spec, mode);
}

LineMode make_mode(const LoadedLineSpec& spec, int m) {
  LineMode mode;
  mode.index = m;
  mode.omega = solve_mode_frequency(spec, m);
  mode.wavenumber = mode.omega / spec.phase_velocity();
  mode.phase = load_phase(spec, mode.omega);
  mode.load_participation = epr_loading(spec, mode);
  mode.load_charge_zpf = std::sqrt(constants::hbar * mode.omega * spec.load_capacitance *
                                   mode.load_participation / 2.0);
  return mode;
}

ModeSet solve_modes(const LoadedLineSpec& spec, int count) {
  if (count < 1) throw Error(ErrorCode::ConfigError, "mode count must be at least 1");
  spec.validate();
  ModeSet out;
  if (spec.termination == Termination::Open) {
    LineMode dc;
    dc.index = 0;
    dc.load_participation = spec.load_capacitance /
                            (spec.load_capacitance + spec.capacitance_per_length * spec.length);
    out.dc_mode = dc;
  }
  for (int k = 0; k < count; ++k) out.modes.push_back(make_mode(spec, spec.first_mode() + k));
  return out;
}

ZeroPointFluctuations zpf(const LoadedLineSpec& spec, const LineMode& mode) {
  ZeroPointFluctuations out;
  out.load_charge = mode.load_charge_zpf;
  const double omega = mode.omega;
  const double c = spec.capacitance_per_length;
  const double energy_scale = constants::hbar * omega / 2.0;
  const double norm = capacitive_norm(spec, mode);
  // Signed profiles: the ZPF follows the sign of the eigenfield.
  out.charge_density = [=](double z) {
    const double u = mode.field(z);
    return std::copysign(std::sqrt(energy_scale * c * c * u * u / norm), u);
  };
  out.flux = [=](double z) {
    const double u = mode.field(z);
    return std::copysign(std::sqrt(energy_scale * u * u / norm), u) / omega;
  };
  return out;
}

double calibrate_length(double omega, int m, const LoadedLineSpec& spec) {
  if (!(omega > 0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidTarget, "target frequency must be positive");
  }
  if (!(spec.capacitance_per_length > 0) || !(spec.inductance_per_length > 0)) {
    throw Error(ErrorCode::ConfigError, "line c and l must be positive");
  }
  const double bracket = branch_target(spec, m) - load_phase(spec, omega);
  if (!(bracket > 0)) {
    throw Error(ErrorCode::InvalidTarget, "no positive length makes " + std::to_string(omega) +
                                              " rad/s the mode " + std::to_string(m) + " frequency");
  }
  return bracket * spec.phase_velocity() / omega;
}

}  // namespace lomq
