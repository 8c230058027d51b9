// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"
#include "lomq/netlist.hpp"
#include "support/circuits.hpp"

namespace lomq {
namespace {

using testing::NodeCircuit;
using testing::stamp;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no lomq::Error thrown";
  return ErrorCode::ConfigError;
}

MaxwellMatrix three_node_maxwell() {
  MaxwellMatrix m;
  m.nodes = {"G", "P0", "P1"};
  m.capacitance.resize(3, 3);
  m.capacitance << 125, -60, -60,  //
      -60, 85, -20,                //
      -60, -20, 85;
  m.capacitance *= 1e-15;
  return m;
}

NodeCircuit two_transmons_with_coupler(double c1, double c2) {
  NodeCircuit c;
  c.nodes = {"a", "b", "x"};
  c.owner = {0, 1, -1};
  c.subsystem_count = 2;
  c.capacitance = Eigen::MatrixXd::Zero(3, 3);
  c.inverse_inductance = Eigen::MatrixXd::Zero(3, 3);
  stamp(c.capacitance, 0, -1, 50e-15);
  stamp(c.capacitance, 1, -1, 60e-15);
  stamp(c.capacitance, 0, 2, c1);
  stamp(c.capacitance, 2, 1, c2);
  stamp(c.inverse_inductance, 0, -1, 1 / 10e-9);
  stamp(c.inverse_inductance, 1, -1, 1 / 12e-9);
  return c;
}

TEST(Maxwell, ReduceDropsDatumRowAndColumn) {
  const Matrix c = reduce_maxwell(three_node_maxwell(), "G");
  ASSERT_EQ(c.rows(), 2);
  EXPECT_DOUBLE_EQ(c(0, 0), 85e-15);
  EXPECT_DOUBLE_EQ(c(0, 1), -20e-15);
  EXPECT_DOUBLE_EQ(c(1, 1), 85e-15);
}

TEST(Maxwell, UnknownDatum) {
  EXPECT_EQ(code_of([] { reduce_maxwell(three_node_maxwell(), "GND"); }), ErrorCode::UnknownDatum);
}

TEST(Maxwell, PositiveOffDiagonalIsMalformed) {
  MaxwellMatrix m = three_node_maxwell();
  m.capacitance(1, 2) = m.capacitance(2, 1) = 5e-15;
  EXPECT_TRUE(maxwell_violation(m).has_value());
  EXPECT_EQ(code_of([&] { reduce_maxwell(m, "G"); }), ErrorCode::MalformedMatrix);
}

TEST(Maxwell, NegativeSelfCapacitanceIsMalformed) {
  MaxwellMatrix m = three_node_maxwell();
  m.capacitance(1, 1) = 70e-15;  // row sum -10 fF
  EXPECT_EQ(code_of([&] { reduce_maxwell(m, "G"); }), ErrorCode::MalformedMatrix);
}

TEST(Maxwell, EmbedInvertsReduce) {
  const MaxwellMatrix m = three_node_maxwell();
  const Matrix c = reduce_maxwell(m, "G");
  const Vector self = m.capacitance.rowwise().sum();
  const std::vector<std::string> nodes = {"P0", "P1"};
  const MaxwellMatrix back = embed_maxwell("G", nodes, c, self);
  EXPECT_EQ(back.nodes, m.nodes);
  EXPECT_LT((back.capacitance - m.capacitance).cwiseAbs().maxCoeff(), 1e-30);
}

TEST(Maxwell, MergeNetsShortsNodes) {
  MaxwellMatrix m;
  m.nodes = {"G1", "G2", "P"};
  m.capacitance.resize(3, 3);
  m.capacitance << 30, -10, -15,  //
      -10, 25, -5,                //
      -15, -5, 40;
  const std::vector<std::string> nets = {"G1", "G2"};
  const MaxwellMatrix merged = merge_nets(m, nets, "G");
  ASSERT_EQ(merged.nodes, (std::vector<std::string>{"G", "P"}));
  // Shorting keeps total charge: the merged row sums the two rows.
  EXPECT_DOUBLE_EQ(merged.capacitance(0, 0), 30 + 25 - 2 * 10);
  EXPECT_DOUBLE_EQ(merged.capacitance(0, 1), -20);
  EXPECT_DOUBLE_EQ(merged.capacitance(1, 1), 40);
}

TEST(Registry, NodesAreSortedAndOwned) {
  NodeRegistry reg("G", {{"Q", {"b", "a"}}}, {"x"}, {{"cell", {"G", "a", "b", "x"}}});
  EXPECT_EQ(reg.nodes(), (std::vector<std::string>{"a", "b", "x"}));
  EXPECT_EQ(reg.owner(0), 0);
  EXPECT_TRUE(reg.is_coupler(2));
  EXPECT_EQ(code_of([&] { reg.require("y"); }), ErrorCode::UnknownNode);
}

TEST(Registry, RejectsInconsistentPartitions) {
  EXPECT_EQ(code_of([] { NodeRegistry("G", {{"Q", {"a"}}}, {"a"}, {{"c", {"a"}}}); }),
            ErrorCode::InvalidPartition);
  EXPECT_EQ(code_of([] { NodeRegistry("G", {{"Q", {"a", "b"}}}, {}, {{"c", {"a"}}}); }),
            ErrorCode::InvalidPartition);
  EXPECT_EQ(code_of([] { NodeRegistry("G", {{"Q", {"a"}}}, {}, {{"c", {"a", "z"}}}); }), ErrorCode::UnknownNode);
  EXPECT_EQ(code_of([] { NodeRegistry("G", {{"Q", {"G"}}}, {}, {{"c", {"G"}}}); }), ErrorCode::InvalidPartition);
}

TEST(Registry, NodeMayBelongToSeveralCells) {
  NodeRegistry reg("G", {{"Q", {"a"}}, {"R", {"b"}}}, {}, {{"c1", {"a", "b"}}, {"c2", {"b"}}});
  EXPECT_EQ(reg.cells_of(*reg.index_of("b")).size(), 2u);
}

TEST(Compose, SharedNodesAddAcrossCells) {
  NodeRegistry reg("G", {{"Q", {"a"}}, {"R", {"b"}}}, {}, {{"c1", {"a", "b"}}, {"c2", {"b"}}});
  Matrix c1(2, 2);
  c1 << 3, -1, -1, 2;
  Matrix c2(1, 1);
  c2 << 5;
  const std::vector<CellMatrices> cells = {{"c1", {"a", "b"}, c1, Matrix::Zero(2, 2), {}},
                                           {"c2", {"b"}, c2, Matrix::Zero(1, 1), {}}};
  const CompositeNetlist net = compose_cells(cells, reg, {});
  EXPECT_DOUBLE_EQ(net.capacitance(1, 1), 7.0);
  EXPECT_DOUBLE_EQ(net.capacitance(0, 1), -1.0);
}

TEST(Compose, RejectsWrongCellSize) {
  NodeRegistry reg("G", {{"Q", {"a"}}}, {}, {{"c", {"a"}}});
  const std::vector<CellMatrices> cells = {{"c", {"a"}, Matrix::Identity(2, 2), Matrix::Zero(2, 2), {}}};
  EXPECT_EQ(code_of([&] { compose_cells(cells, reg, {}); }), ErrorCode::DimensionMismatch);
}

TEST(Junction, EnergyAndInductanceAgree) {
  const double lj = 11e-9;
  const double ej = josephson_energy_from_inductance(lj);
  EXPECT_NEAR(ej, constants::reduced_flux_quantum * constants::reduced_flux_quantum / lj, 1e-12 * ej);
  EXPECT_NEAR(josephson_inductance(ej), lj, 1e-12 * lj);
  const auto squid = JunctionElement::from_energy("J", "a", "G", JunctionKind::SymmetricSquid, ej, 0.25 *
                                                  constants::flux_quantum, 1e-15, "Q");
  EXPECT_NEAR(squid.bias_josephson_energy(), ej * std::cos(0.25 * std::numbers::pi), 1e-12 * ej);
  EXPECT_NEAR(squid.inductance, lj / std::cos(0.25 * std::numbers::pi), 1e-12 * lj);
}

TEST(Reduction, CapacitiveCouplerBecomesSeriesCapacitance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cap(1e-15, 300e-15);
  for (int trial = 0; trial < 50; ++trial) {
    const double c1 = cap(rng), c2 = cap(rng);
    const ReducedCircuit rc = reduce_circuit(testing::to_netlist(two_transmons_with_coupler(c1, c2)));
    ASSERT_EQ(rc.labels, (std::vector<std::string>{"a", "b"}));
    const double series = c1 * c2 / (c1 + c2);
    EXPECT_NEAR(-rc.capacitance(0, 1), series, 1e-12 * series);
    EXPECT_NEAR(rc.capacitance(0, 0), 50e-15 + series, 1e-12 * rc.capacitance(0, 0));
    EXPECT_EQ(rc.eliminated.size(), 1u);
  }
}

TEST(Reduction, InductiveCouplerGoesThroughSecondPass) {
  NodeCircuit c = two_transmons_with_coupler(0, 0);
  c.capacitance.setZero();
  stamp(c.capacitance, 0, -1, 50e-15);
  stamp(c.capacitance, 1, -1, 60e-15);
  stamp(c.inverse_inductance, 0, 2, 1 / 7e-9);
  stamp(c.inverse_inductance, 2, 1, 1 / 13e-9);
  const ReducedCircuit rc = reduce_circuit(testing::to_netlist(c));
  EXPECT_EQ(rc.first_pass.eliminated.cols(), 0);
  EXPECT_EQ(rc.second_pass.eliminated.cols(), 1);
  EXPECT_NEAR(-1.0 / rc.inverse_inductance(0, 1), 20e-9, 1e-12 * 20e-9);
}

TEST(Reduction, MatchesBruteForceOnRandomCircuits) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int subsystem_nodes = 1 + static_cast<int>(rng() % 5);
    const int couplers = 1 + static_cast<int>(rng() % 3);
    const NodeCircuit c = testing::random_circuit(rng, subsystem_nodes, couplers);
    const ReducedCircuit rc = reduce_circuit(testing::to_netlist(c));
    EXPECT_EQ(rc.labels.size(), static_cast<std::size_t>(subsystem_nodes));
    const Vector reduced = normal_mode_frequencies(rc.capacitance, rc.inverse_inductance);
    const Vector oracle = testing::brute_force_frequencies(c.capacitance, c.inverse_inductance);
    ASSERT_EQ(reduced.size(), oracle.size());
    for (Eigen::Index i = 0; i < oracle.size(); ++i) EXPECT_NEAR(reduced(i), oracle(i), 1e-10 * oracle(i));
  }
}

TEST(Reduction, FloatingJunctionIsRotatedFirst) {
  NodeCircuit c;
  c.nodes = {"a", "b"};
  c.owner = {0, 0};
  c.subsystem_count = 1;
  c.capacitance = Matrix::Zero(2, 2);
  c.inverse_inductance = Matrix::Zero(2, 2);
  stamp(c.capacitance, 0, -1, 40e-15);
  stamp(c.capacitance, 1, -1, 55e-15);
  stamp(c.capacitance, 0, 1, 30e-15);
  stamp(c.inverse_inductance, 1, -1, 1 / 3e-9);
  const auto j = JunctionElement::from_inductance("J", "a", "b", 12e-9, 2e-15, "S0");
  const ReducedCircuit rc = reduce_circuit(testing::to_netlist(c, {j}));
  ASSERT_EQ(rc.labels.front(), "J");
  EXPECT_NEAR(rc.inverse_inductance(0, 0) - rc.linear_inverse_inductance(0, 0), 1 / 12e-9, 1e-3);

  Matrix cn = c.capacitance, ln = c.inverse_inductance;
  stamp(cn, 0, 1, 2e-15);
  stamp(ln, 0, 1, 1 / 12e-9);
  const Vector oracle = testing::brute_force_frequencies(cn, ln);
  const Vector reduced = normal_mode_frequencies(rc.capacitance, rc.inverse_inductance);
  ASSERT_EQ(reduced.size(), oracle.size());
  for (Eigen::Index i = 0; i < oracle.size(); ++i) EXPECT_NEAR(reduced(i), oracle(i), 1e-10 * oracle(i));
}

TEST(Reduction, DependentJunctionLoop) {
  NodeCircuit c;
  c.nodes = {"a", "b"};
  c.owner = {0, 0};
  c.subsystem_count = 1;
  c.capacitance = Matrix::Identity(2, 2) * 50e-15;
  c.inverse_inductance = Matrix::Zero(2, 2);
  const std::vector<JunctionElement> loop = {
      JunctionElement::from_inductance("J1", "a", "gnd", 10e-9, 1e-15, "S0"),
      JunctionElement::from_inductance("J2", "b", "gnd", 10e-9, 1e-15, "S0"),
      JunctionElement::from_inductance("J3", "a", "b", 10e-9, 1e-15, "S0")};
  EXPECT_EQ(code_of([&] { reduce_circuit(testing::to_netlist(c, loop)); }), ErrorCode::DependentJunctionLoop);
}

TEST(Reduction, IsolatedCouplerIsSingular) {
  NodeCircuit c = two_transmons_with_coupler(0, 0);
  EXPECT_EQ(code_of([&] { reduce_circuit(testing::to_netlist(c)); }), ErrorCode::SingularCouplerBlock);
}

TEST(Reduction, MixedCouplerIsRetainedWithWarning) {
  NodeCircuit c = two_transmons_with_coupler(20e-15, 0);
  stamp(c.inverse_inductance, 2, 1, 1 / 5e-9);
  const ReducedCircuit rc = reduce_circuit(testing::to_netlist(c));
  EXPECT_TRUE(rc.index_of("x").has_value());
  ASSERT_GE(rc.warnings.size(), 2u);
  EXPECT_NE(rc.warnings[0].find("both capacitive and inductive"), std::string::npos);
}

TEST(Constraints, ExplicitDirectionMustBeNull) {
  Matrix k = Matrix::Zero(2, 2);
  k(0, 0) = 1.0;
  Matrix ok(2, 1);
  ok << 0, 1;
  EXPECT_EQ(select_constraint_basis(k, ok).retained_coordinates, (std::vector<std::size_t>{0}));
  Matrix bad(2, 1);
  bad << 1, 1;
  EXPECT_EQ(code_of([&] { select_constraint_basis(k, bad); }), ErrorCode::NonNullDirection);
}

TEST(Constraints, SubsystemNullDirectionsAreKept) {
  const Matrix k = Matrix::Zero(3, 3);
  const std::vector<int> owners = {0, NodeRegistry::kCoupler, 1};
  const ConstraintBasis basis = select_constraint_basis(k, owners);
  EXPECT_EQ(basis.eliminated.cols(), 1);
  EXPECT_EQ(basis.retained_coordinates, (std::vector<std::size_t>{0, 2}));
}

TEST(Blocks, CouplingCarriesFactorTwo) {
  const ReducedCircuit rc = reduce_circuit(testing::to_netlist(two_transmons_with_coupler(20e-15, 30e-15)));
  const BlockExtraction blocks = extract_blocks(rc);
  ASSERT_EQ(blocks.couplings.size(), 1u);
  const Matrix inv = rc.capacitance.inverse();
  EXPECT_NEAR(blocks.couplings[0].inverse_capacitance, 2.0 * inv(0, 1), 1e-12 * std::abs(inv(0, 1)));
  EXPECT_NEAR(blocks.port_inverse_capacitance("a"), inv(0, 0), 1e-12 * inv(0, 0));
  ASSERT_EQ(blocks.subsystems.size(), 2u);
  EXPECT_EQ(blocks.subsystems[1].coordinates, (std::vector<std::string>{"b"}));
}

TEST(Modes, SingleOscillator) {
  Matrix c(1, 1), l(1, 1);
  c << 80e-15;
  l << 1 / 10e-9;
  const Vector w = normal_mode_frequencies(c, l);
  ASSERT_EQ(w.size(), 1);
  EXPECT_NEAR(w(0), 1.0 / std::sqrt(80e-15 * 10e-9), 1e-12 * w(0));
}

}  // namespace
}  // namespace lomq
