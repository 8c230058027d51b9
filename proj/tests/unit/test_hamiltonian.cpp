// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"
#include "lomq/hamiltonian.hpp"
#include "lomq/subsystems.hpp"

namespace lomq {
namespace {

constexpr double kHbar = constants::hbar;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

QuantizedSubsystem oscillator(const std::string& name, double omega, double capacitance, int levels) {
  const double qzpf = std::sqrt(kHbar * omega * capacitance / 2.0);
  const double fzpf = std::sqrt(kHbar / (2.0 * omega * capacitance));
  QuantizedSubsystem s;
  s.name = name;
  s.kind = SubsystemKind::Line;
  s.factors.push_back(harmonic_mode(name, omega, levels));
  s.ports.push_back(PortOperators{name, {OperatorTerm{0, qzpf, harmonic_charge(levels, qzpf)}},
                                  {OperatorTerm{0, fzpf, harmonic_flux(levels, fzpf)}}});
  return s;
}

QuantizedSubsystem transmon(double ej_over_ec, int levels = 5) {
  TransmonSpec spec;
  spec.capacitance = 65e-15;
  spec.josephson_energy = ej_over_ec * spec.charging_energy();
  spec.levels = levels;
  return diagonalize_transmon(spec, "Q", "Q");
}

// Two LC oscillators joined by a capacitor Cc. The classical normal modes are
// exact; the dressed single-excitation energies must reproduce them.
TEST(FullHamiltonian, CapacitivelyCoupledOscillatorsMatchNormalModes) {
  const double c1 = 80e-15, c2 = 300e-15, cc = 6e-15, l1 = 10e-9, l2 = 2.2e-9;
  Eigen::Matrix2d c;
  c << c1 + cc, -cc, -cc, c2 + cc;
  const Eigen::Matrix2d inv = c.inverse();
  const double ce1 = 1.0 / inv(0, 0), ce2 = 1.0 / inv(1, 1);
  const double w1 = 1.0 / std::sqrt(l1 * ce1), w2 = 1.0 / std::sqrt(l2 * ce2);

  std::vector<QuantizedSubsystem> subs = {oscillator("a", w1, ce1, 10), oscillator("b", w2, ce2, 10)};
  CouplingGraph graph;
  graph.add(CouplingEdge{0, 1, "a", "b", 2.0 * inv(0, 1), 0.0});
  const DressedSpectrum s = diagonalize(build_full_hamiltonian(subs, graph));

  Eigen::Matrix2d k = Eigen::Matrix2d::Zero();
  k(0, 0) = 1 / l1;
  k(1, 1) = 1 / l2;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> classical(k, c);
  const double e00 = s.require({0, 0});
  EXPECT_NEAR((s.require({1, 0}) - e00) / kHbar, std::sqrt(classical.eigenvalues()(0)),
              1e-8 * std::sqrt(classical.eigenvalues()(0)));
  EXPECT_NEAR((s.require({0, 1}) - e00) / kHbar, std::sqrt(classical.eigenvalues()(1)),
              1e-8 * std::sqrt(classical.eigenvalues()(1)));
}

TEST(FullHamiltonian, InductiveCouplingMatchesNormalModes) {
  const double c1 = 80e-15, c2 = 120e-15, l1 = 10e-9, l2 = 7e-9, lm = 200e-9;
  Eigen::Matrix2d kmat;
  kmat << 1 / l1 + 1 / lm, -1 / lm, -1 / lm, 1 / l2 + 1 / lm;
  const double w1 = std::sqrt(kmat(0, 0) / c1), w2 = std::sqrt(kmat(1, 1) / c2);
  std::vector<QuantizedSubsystem> subs = {oscillator("a", w1, c1, 10), oscillator("b", w2, c2, 10)};
  CouplingGraph graph;
  graph.add(CouplingEdge{0, 1, "a", "b", 0.0, 2.0 * kmat(0, 1)});
  const DressedSpectrum s = diagonalize(build_full_hamiltonian(subs, graph));
  Eigen::Matrix2d cmat = Eigen::Matrix2d::Zero();
  cmat(0, 0) = c1;
  cmat(1, 1) = c2;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> classical(kmat, cmat);
  // The modes hybridize strongly, so compare the two excitation energies as a set.
  const double e00 = s.require({0, 0});
  const double lo = std::min(s.require({1, 0}), s.require({0, 1})) - e00;
  const double hi = std::max(s.require({1, 0}), s.require({0, 1})) - e00;
  EXPECT_NEAR(lo / kHbar, std::sqrt(classical.eigenvalues()(0)), 1e-8 * std::sqrt(classical.eigenvalues()(0)));
  EXPECT_NEAR(hi / kHbar, std::sqrt(classical.eigenvalues()(1)), 1e-8 * std::sqrt(classical.eigenvalues()(1)));
}

TEST(FullHamiltonian, IsHermitianAndUncoupledSpectrumIsBare) {
  std::vector<QuantizedSubsystem> subs = {transmon(45.0, 4), oscillator("r", kTwoPi * 7e9, 300e-15, 3)};
  const CompositeHamiltonian h0 = build_full_hamiltonian(subs, CouplingGraph{});
  EXPECT_EQ(h0.dimension(), 12u);
  const DressedSpectrum s0 = diagonalize(h0);
  for (int q = 0; q < 4; ++q) {
    for (int r = 0; r < 3; ++r) {
      EXPECT_NEAR(s0.require({q, r}), subs[0].factors[0].energies(q) + subs[1].factors[0].energies(r),
                  1e-12 * std::abs(s0.require({q, r})));
    }
  }

  CouplingGraph graph;
  graph.add(CouplingEdge{0, 1, "Q", "r", 1e13, 0.0});
  const CompositeHamiltonian h = build_full_hamiltonian(subs, graph);
  EXPECT_LT((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-40);
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> reference(h.matrix);
  const DressedSpectrum s = diagonalize(h);
  EXPECT_LT((s.energies - reference.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12 * s.energies.cwiseAbs().maxCoeff());
  EXPECT_LT(s.energies(0), s.energies(1));
}

TEST(FullHamiltonian, ZeroEdgeLeavesSpectrumBitIdentical) {
  std::vector<QuantizedSubsystem> subs = {transmon(45.0), oscillator("r", kTwoPi * 7e9, 300e-15, 4),
                                          oscillator("b", kTwoPi * 6.2e9, 250e-15, 3)};
  CouplingGraph base;
  base.add(CouplingEdge{0, 1, "Q", "r", 2e13, 0.0});
  CouplingGraph with_zero = base;
  with_zero.add(CouplingEdge{0, 2, "Q", "b", 0.0, 0.0});
  EXPECT_EQ(with_zero.edges().size(), 1u);
  const DressedSpectrum a = diagonalize(build_full_hamiltonian(subs, base));
  const DressedSpectrum b = diagonalize(build_full_hamiltonian(subs, with_zero));
  EXPECT_TRUE(a.energies == b.energies);
}

TEST(FullHamiltonian, SubsystemOrderDoesNotChangeObservables) {
  const QuantizedSubsystem q = transmon(45.0);
  const QuantizedSubsystem r = oscillator("r", kTwoPi * 7e9, 300e-15, 6);
  const double inv_c = 1e12;

  std::vector<QuantizedSubsystem> qr = {q, r};
  CouplingGraph g1;
  g1.add(CouplingEdge{0, 1, "Q", "r", inv_c, 0.0});
  const DispersiveObservables o1 = extract_dispersive(diagonalize(build_full_hamiltonian(qr, g1)), 0, 1);

  std::vector<QuantizedSubsystem> rq = {r, q};
  CouplingGraph g2;
  g2.add(CouplingEdge{1, 0, "Q", "r", inv_c, 0.0});  // stored as (0, 1) after normalization
  const DispersiveObservables o2 = extract_dispersive(diagonalize(build_full_hamiltonian(rq, g2)), 1, 0);

  EXPECT_NEAR(o1.chi_qr, o2.chi_qr, 1e-10 * std::abs(o1.chi_qr));
  EXPECT_NEAR(o1.qubit_frequency, o2.qubit_frequency, 1e-10 * o1.qubit_frequency);
  EXPECT_NEAR(o1.readout_frequency, o2.readout_frequency, 1e-10 * o1.readout_frequency);
  EXPECT_NEAR(o1.qubit_anharmonicity, o2.qubit_anharmonicity, 1e-10 * std::abs(o1.qubit_anharmonicity));
}

// Second order in the coupling with counter-rotating terms kept: the
// resonator frequency with the transmon in level j is pulled by
// sum_k g_jk^2 2 w_kj / (w_r^2 - w_kj^2).
TEST(Dispersive, WeakCouplingMatchesSecondOrderSum) {
  TransmonSpec spec;
  spec.capacitance = 65e-15;
  spec.josephson_energy = 45.0 * spec.charging_energy();
  spec.levels = 7;
  const TransmonSolution t = solve_transmon(spec);
  const double wr = kTwoPi * 7.2e9, cr = 300e-15;
  const double qzpf = std::sqrt(kHbar * wr * cr / 2.0);
  const double inv_c = 4e11;

  std::vector<QuantizedSubsystem> subs = {diagonalize_transmon(spec, "Q", "Q"), oscillator("r", wr, cr, 8)};
  CouplingGraph graph;
  graph.add(CouplingEdge{0, 1, "Q", "r", inv_c, 0.0});
  const DispersiveObservables obs = extract_dispersive(diagonalize(build_full_hamiltonian(subs, graph)), 0, 1);

  auto pull = [&](int j) {
    double sum = 0.0;
    for (int k = 0; k < 7; ++k) {
      if (k == j) continue;
      const double g = 0.5 * inv_c * 2.0 * constants::elementary_charge * t.charge_number(j, k) * qzpf / kHbar;
      const double w = (t.energies(k) - t.energies(j)) / kHbar;
      sum += g * g * 2.0 * w / (wr * wr - w * w);
    }
    return sum;
  };
  const double expected = (pull(1) - pull(0)) / kTwoPi;
  EXPECT_NEAR(obs.chi_qr, expected, 0.02 * std::abs(expected));
  EXPECT_NEAR(obs.chi(0, 1), obs.chi_qr, 0.0);
  EXPECT_LT(obs.qubit_anharmonicity, 0.0);
}

TEST(Spectrum, LabelsAndErrors) {
  std::vector<QuantizedSubsystem> subs = {transmon(45.0, 3), oscillator("r", kTwoPi * 7e9, 300e-15, 3)};
  const CompositeHamiltonian h = build_full_hamiltonian(subs, CouplingGraph{});
  EXPECT_EQ(h.factor_index("r"), 1u);
  EXPECT_THROW(h.factor_index("missing"), Error);
  const DressedSpectrum s = diagonalize(h);
  EXPECT_EQ(s.excitation({{1, 2}}), (Label{0, 2}));
  EXPECT_EQ(s.labels.size(), 9u);
  EXPECT_EQ(s.unlabeled, 0u);
  EXPECT_FALSE(s.energy({3, 0}).has_value());
  try {
    s.require({3, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnlabeledState);
  }
}

TEST(FullHamiltonian, RejectsOversizeAndUnsupportedCouplings) {
  std::vector<QuantizedSubsystem> subs = {transmon(45.0, 5), oscillator("r", kTwoPi * 7e9, 300e-15, 5)};
  try {
    build_full_hamiltonian(subs, CouplingGraph{}, 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionOverflow);
  }
  CouplingGraph flux;
  flux.add(CouplingEdge{0, 1, "Q", "r", 0.0, 1e7});
  try {
    build_full_hamiltonian(subs, flux);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsupported);
  }
  CouplingGraph unknown;
  unknown.add(CouplingEdge{0, 1, "Q", "nope", 1e13, 0.0});
  EXPECT_THROW(build_full_hamiltonian(subs, unknown), Error);
  CouplingGraph self;
  EXPECT_THROW(self.add(CouplingEdge{1, 1, "r", "r", 1e13, 0.0}), Error);
}

TEST(Graph, FilteredAndFind) {
  CouplingGraph g;
  g.add(CouplingEdge{0, 1, "a", "b", 1.0, 0.0});
  g.add(CouplingEdge{1, 2, "b", "c", 2.0, 0.0});
  EXPECT_TRUE(g.find(1, "b", 0, "a").has_value());
  EXPECT_FALSE(g.find(0, "a", 2, "c").has_value());
  const CouplingGraph f = g.filtered([](const CouplingEdge& e) { return e.subsystem_a == 0; });
  EXPECT_EQ(f.edges().size(), 1u);
}

}  // namespace
}  // namespace lomq
