// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/subsystems.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"

namespace lomq {
namespace {

using Index = Eigen::Index;

void fix_sign(Eigen::MatrixXd& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index row = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&row);
    if (vectors(row, c) < 0) vectors.col(c) *= -1.0;
  }
}

}  // namespace

double TransmonSpec::charging_energy() const {
  return constants::elementary_charge * constants::elementary_charge / (2.0 * capacitance);
}

double TransmonSpec::offset_charge_number() const {
  return charge_offset / (2.0 * constants::elementary_charge);
}

void TransmonSpec::validate() const {
  if (!(capacitance > 0) || !std::isfinite(capacitance)) {
    throw Error(ErrorCode::ConfigError, "transmon capacitance must be positive");
  }
  if (!(josephson_energy >= 0) || !std::isfinite(josephson_energy)) {
    throw Error(ErrorCode::ConfigError, "Josephson energy must be non-negative");
  }
  if (charge_cutoff < 10) throw Error(ErrorCode::ConfigError, "charge cutoff must be at least 10");
  if (levels < 1 || levels > 2 * charge_cutoff) {
    throw Error(ErrorCode::ConfigError, "transmon levels must lie in [1, 2 n_max]");
  }
}

TransmonSolution solve_transmon(const TransmonSpec& spec) {
  spec.validate();
  const int n_max = spec.charge_cutoff;
  const Index dim = 2 * n_max + 1;
  const double ec = spec.charging_energy();
  const double ng = spec.offset_charge_number();

  // Solved in units of E_C: the tridiagonal QR loses digits on entries near
  // 1e-23 J.
  Eigen::VectorXd diagonal(dim);
  Eigen::VectorXd charge(dim);
  for (Index i = 0; i < dim; ++i) {
    charge(i) = static_cast<double>(i - n_max);
    diagonal(i) = 4.0 * (charge(i) - ng) * (charge(i) - ng);
  }
  const Eigen::VectorXd off = Eigen::VectorXd::Constant(dim - 1, -0.5 * spec.josephson_energy / ec);

  // computeFromTridiagonal stalls on the nearly degenerate +-n pairs for
  // some E_J/E_C; the dense path reduces the matrix itself and does not.
  Eigen::MatrixXd hamiltonian = diagonal.asDiagonal();
  hamiltonian.diagonal(1) = off;
  hamiltonian.diagonal(-1) = off;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::TruncationNotConverged, "transmon eigensolver failed");
  }

  TransmonSolution out;
  out.charge_cutoff = n_max;
  out.energies = solver.eigenvalues().head(spec.levels);
  out.eigenvectors = solver.eigenvectors().leftCols(spec.levels);
  fix_sign(out.eigenvectors);
  // Eigenvalues carry eps * 4 n_max^2 absolute error. The Rayleigh quotient
  // does not, since the low states vanish at large |n|.
  for (Index k = 0; k < spec.levels; ++k) {
    const auto v = out.eigenvectors.col(k);
    const double norm = v.squaredNorm();
    double e = (diagonal.array() * v.array().square()).sum();
    e += 2.0 * (off.array() * v.head(dim - 1).array() * v.tail(dim - 1).array()).sum();
    out.energies(k) = ec * e / norm;
  }
  out.charge_number = out.eigenvectors.transpose() * charge.asDiagonal() * out.eigenvectors;
  out.charge_number = 0.5 * (out.charge_number + out.charge_number.transpose()).eval();
  return out;
}

const PortOperators* QuantizedSubsystem::find_port(std::string_view port) const {
  for (const auto& p : ports) {
    if (p.port == port) return &p;
  }
  return nullptr;
}

QuantizedSubsystem diagonalize_transmon(const TransmonSpec& spec, std::string name, std::string port) {
  TransmonSolution base = solve_transmon(spec);
  TransmonSpec doubled = spec;
  doubled.charge_cutoff *= 2;
  doubled.levels = std::max(2, spec.levels);
  const TransmonSolution check = solve_transmon(doubled);
  if (base.energies.size() >= 2) {
    const double e01 = base.energies(1) - base.energies(0);
    const double e01_check = check.energies(1) - check.energies(0);
    if (std::abs(e01 - e01_check) > kTransmonConvergence * std::abs(e01_check)) {
      throw Error(ErrorCode::TruncationNotConverged,
                  "transmon E01 changes by " + std::to_string(std::abs(e01 - e01_check) / std::abs(e01_check)) +
                      " relative when the charge cutoff doubles; raise charge_cutoff");
    }
  }

  QuantizedSubsystem out;
  out.name = std::move(name);
  out.kind = SubsystemKind::Transmon;
  ModeFactor factor;
  factor.label = out.name;
  factor.energies = base.energies;
  out.factors.push_back(std::move(factor));

  const double scale = 2.0 * constants::elementary_charge;
  PortOperators ops;
  ops.port = std::move(port);
  ops.charge.push_back(OperatorTerm{0, scale, (scale * base.charge_number).cast<std::complex<double>>()});
  out.ports.push_back(std::move(ops));
  return out;
}

Eigen::MatrixXd annihilation(int levels) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix harmonic_charge(int levels, double zpf) {
  const Eigen::MatrixXd a = annihilation(levels);
  const std::complex<double> i(0.0, 1.0);
  return i * zpf * (a.transpose() - a).cast<std::complex<double>>();
}

ComplexMatrix harmonic_flux(int levels, double zpf) {
  const Eigen::MatrixXd a = annihilation(levels);
  return (zpf * (a + a.transpose())).cast<std::complex<double>>();
}

ModeFactor harmonic_mode(std::string label, double omega, int levels) {
  if (levels < 1) throw Error(ErrorCode::ConfigError, "mode levels must be at least 1");
  ModeFactor f;
  f.label = std::move(label);
  f.omega = omega;
  f.energies.resize(levels);
  for (int n = 0; n < levels; ++n) f.energies(n) = constants::hbar * omega * (n + 0.5);
  return f;
}

QuantizedSubsystem quantize_line(const LoadedLineSpec& spec, std::span<const LineMode> modes, int levels,
                                 std::span<const LinePort> ports, std::string name) {
  const std::vector<int> per_mode(modes.size(), levels);
  return quantize_line(spec, modes, per_mode, ports, std::move(name));
}

QuantizedSubsystem quantize_line(const LoadedLineSpec& spec, std::span<const LineMode> modes,
                                 std::span<const int> levels_per_mode, std::span<const LinePort> ports,
                                 std::string name) {
  if (levels_per_mode.size() != modes.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one truncation per line mode is required");
  }
  QuantizedSubsystem out;
  out.name = std::move(name);
  out.kind = SubsystemKind::Line;
  for (const auto& port : ports) out.ports.push_back(PortOperators{port.name, {}, {}});

  for (std::size_t k = 0; k < modes.size(); ++k) {
    const LineMode& mode = modes[k];
    const int levels = levels_per_mode[k];
    out.factors.push_back(harmonic_mode(out.name + "[" + std::to_string(mode.index) + "]", mode.omega, levels));
    const ZeroPointFluctuations fluct = zpf(spec, mode);
    for (std::size_t p = 0; p < ports.size(); ++p) {
      double charge_zpf = 0.0;
      double flux_zpf = 0.0;
      if (ports[p].end == LineEnd::Load) {
        flux_zpf = fluct.flux(0.0);
        charge_zpf = ports[p].capacitance > 0 ? ports[p].capacitance * mode.omega * flux_zpf : fluct.load_charge;
      } else {
        flux_zpf = fluct.flux(spec.length);
        charge_zpf = ports[p].capacitance * mode.omega * flux_zpf;
      }
      out.ports[p].charge.push_back(OperatorTerm{k, charge_zpf, harmonic_charge(levels, charge_zpf)});
      out.ports[p].flux.push_back(OperatorTerm{k, flux_zpf, harmonic_flux(levels, flux_zpf)});
    }
  }
  return out;
}

std::vector<ScaledPort> scale_operators(const QuantizedSubsystem& subsystem) {
  std::vector<ScaledPort> out;
  for (const auto& port : subsystem.ports) {
    ScaledPort scaled;
    scaled.port = port.port;
    for (const auto& term : port.charge) {
      ComplexMatrix m = term.scale == 0.0 ? ComplexMatrix(ComplexMatrix::Zero(term.matrix.rows(), term.matrix.cols()))
                                          : ComplexMatrix(term.matrix / term.scale);
      scaled.charge.push_back(ScaledTerm{term.factor, term.scale, std::move(m)});
    }
    out.push_back(std::move(scaled));
  }
  return out;
}

}  // namespace lomq
