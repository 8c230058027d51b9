// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"
#include "lomq/loaded_line.hpp"
#include "lomq/subsystems.hpp"

namespace lomq {
namespace {

constexpr double kE = constants::elementary_charge;

TransmonSpec transmon(double ej_over_ec, double ng = 0.0, int levels = 4) {
  TransmonSpec s;
  s.capacitance = 75e-15;
  s.josephson_energy = ej_over_ec * s.charging_energy();
  s.charge_offset = 2.0 * kE * ng;
  s.levels = levels;
  return s;
}

// Mathieu characteristic values at q = 25 (E_J/E_C = 50), in units of E_C:
// a_0, b_2, a_2, b_4 for n_g = 0 and b_1, a_1, b_3, a_3 for n_g = 1/2.
constexpr double kMathieuInteger[] = {-40.25677954656679, -21.314860622249853, -3.5221647271582954,
                                      12.98648995274246};
constexpr double kMathieuHalf[] = {-40.25677898468416, -21.314899690665726, -3.520941526621369,
                                   12.964079444326467};

TEST(Transmon, MatchesMathieuSpectrum) {
  for (double ng : {0.0, 0.5}) {
    const TransmonSpec spec = transmon(50.0, ng);
    const TransmonSolution s = solve_transmon(spec);
    const double* ref = ng == 0.0 ? kMathieuInteger : kMathieuHalf;
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(s.energies(k) / spec.charging_energy(), ref[k], 1e-9 * std::abs(ref[k])) << "ng " << ng << " k " << k;
    }
  }
}

TEST(Transmon, FreeRotorAtZeroJosephsonEnergy) {
  const TransmonSpec spec = transmon(0.0, 0.2, 5);
  const TransmonSolution s = solve_transmon(spec);
  std::vector<double> expected;
  for (int n = -30; n <= 30; ++n) expected.push_back(4.0 * (n - 0.2) * (n - 0.2));
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(s.energies(k) / spec.charging_energy(), expected[k], 1e-12 * (1 + expected[k]));
  }
}

TEST(Transmon, OffsetChargeSymmetries) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ng(-1.0, 1.0), ratio(1.0, 100.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double r = ratio(rng), g = ng(rng);
    const Eigen::VectorXd e = solve_transmon(transmon(r, g)).energies;
    const double scale = e(3) - e(0);
    EXPECT_LT((solve_transmon(transmon(r, g + 1.0)).energies - e).cwiseAbs().maxCoeff(), 1e-10 * scale);
    EXPECT_LT((solve_transmon(transmon(r, -g)).energies - e).cwiseAbs().maxCoeff(), 1e-10 * scale);
  }
}

TEST(Transmon, ApproachesHarmonicLimit) {
  for (double r : {50.0, 100.0, 200.0}) {
    const TransmonSpec spec = transmon(r);
    const TransmonSolution s = solve_transmon(spec);
    const double ec = spec.charging_energy();
    const double e01 = s.energies(1) - s.energies(0);
    EXPECT_NEAR(e01, std::sqrt(8.0 * r) * ec - ec, 0.01 * e01);
    // n01 of the equivalent oscillator, (E_J / 8 E_C)^(1/4) / sqrt 2.
    const double n01 = std::pow(r / 8.0, 0.25) / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s.charge_number(0, 1)), n01, 0.03 * n01);
  }
}

TEST(Transmon, FrequencyFallsWithInductance) {
  double previous = INFINITY;
  for (double lj = 8e-9; lj < 20e-9; lj += 1e-9) {
    TransmonSpec s;
    s.capacitance = 75e-15;
    s.josephson_energy = constants::reduced_flux_quantum * constants::reduced_flux_quantum / lj;
    const TransmonSolution sol = solve_transmon(s);
    const double e01 = sol.energies(1) - sol.energies(0);
    EXPECT_LT(e01, previous);
    previous = e01;
  }
}

TEST(Transmon, ChargeMatrixIsSymmetricWithParity) {
  const TransmonSolution s = solve_transmon(transmon(40.0, 0.0, 5));
  EXPECT_LT((s.charge_number - s.charge_number.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  // At n_g = 0 the states alternate parity, so n only links opposite parity.
  EXPECT_NEAR(s.charge_number(0, 2), 0.0, 1e-10);
  EXPECT_NEAR(s.charge_number(1, 1), 0.0, 1e-10);
}

TEST(Transmon, ValidationAndConvergence) {
  TransmonSpec bad = transmon(50.0);
  bad.charge_cutoff = 5;
  EXPECT_THROW(bad.validate(), Error);
  bad = transmon(50.0);
  bad.levels = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = transmon(50.0);
  bad.josephson_energy = -1.0;
  EXPECT_THROW(bad.validate(), Error);

  TransmonSpec deep = transmon(5000.0);
  deep.charge_cutoff = 10;
  try {
    diagonalize_transmon(deep);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncationNotConverged);
  }
  EXPECT_NO_THROW(diagonalize_transmon(transmon(50.0)));
}

TEST(Transmon, PortOperatorIsTwoECharge) {
  const TransmonSpec spec = transmon(50.0);
  const QuantizedSubsystem q = diagonalize_transmon(spec, "Q", "J");
  ASSERT_EQ(q.factors.size(), 1u);
  const PortOperators* port = q.find_port("J");
  ASSERT_NE(port, nullptr);
  EXPECT_EQ(q.find_port("K"), nullptr);
  const TransmonSolution s = solve_transmon(spec);
  EXPECT_NEAR(std::abs(port->charge[0].matrix(0, 1)), 2 * kE * std::abs(s.charge_number(0, 1)), 1e-30);
  const auto scaled = scale_operators(q);
  EXPECT_NEAR(std::abs(scaled[0].charge[0].matrix(0, 1)), std::abs(s.charge_number(0, 1)), 1e-12);
}

TEST(Harmonic, LadderOperators) {
  const int n = 6;
  const Eigen::MatrixXd a = annihilation(n);
  const Eigen::MatrixXd comm = a * a.transpose() - a.transpose() * a;
  for (int k = 0; k + 1 < n; ++k) EXPECT_NEAR(comm(k, k), 1.0, 1e-15);
  EXPECT_NEAR(comm(n - 1, n - 1), 1.0 - n, 1e-12);  // truncation edge

  const ComplexMatrix q = harmonic_charge(n, 2.5);
  const ComplexMatrix phi = harmonic_flux(n, 4.0);
  EXPECT_LT((q - q.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((phi - phi.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(q(0, 1)), 2.5, 1e-15);
  EXPECT_NEAR(std::abs(phi(1, 2)), 4.0 * std::sqrt(2.0), 1e-14);
  // [Phi, Q] = 2i Phi_zpf Q_zpf below the truncation edge.
  const ComplexMatrix c = phi * q - q * phi;
  EXPECT_NEAR(c(0, 0).imag(), 2.0 * 2.5 * 4.0, 1e-12);

  const ModeFactor m = harmonic_mode("r", 1e10, 4);
  EXPECT_NEAR(m.energies(3) - m.energies(2), constants::hbar * 1e10, 1e-36);
  EXPECT_THROW(harmonic_mode("r", 1e10, 0), Error);
}

TEST(Line, PortsUseLoadAndFarEndZpf) {
  const auto spec = LoadedLineSpec::from_impedance(6e-3, 50.0, 1.2e8, 300e-15);
  const ModeSet modes = solve_modes(spec, 2);
  const std::vector<LinePort> ports = {{"load", LineEnd::Load, 0.0}, {"far", LineEnd::Far, 10e-15}};
  const QuantizedSubsystem line = quantize_line(spec, modes.modes, 4, ports, "R");
  ASSERT_EQ(line.factors.size(), 2u);
  ASSERT_EQ(line.ports.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    const LineMode& mode = modes.modes[k];
    const ZeroPointFluctuations z = zpf(spec, mode);
    EXPECT_NEAR(line.ports[0].charge[k].scale, mode.load_charge_zpf, 1e-12 * mode.load_charge_zpf);
    EXPECT_NEAR(line.ports[1].charge[k].scale, 10e-15 * mode.omega * z.flux(spec.length),
                1e-12 * std::abs(line.ports[1].charge[k].scale));
    EXPECT_EQ(line.ports[0].charge[k].factor, k);
  }
  const std::vector<int> levels = {4};
  EXPECT_THROW(quantize_line(spec, modes.modes, levels, ports, "R"), Error);
}

TEST(Coupling, EnergyIsProductOverCapacitance) {
  EXPECT_DOUBLE_EQ(coupling_energy(2.0, 3.0, 0.5), 3.0);
}

}  // namespace
}  // namespace lomq
