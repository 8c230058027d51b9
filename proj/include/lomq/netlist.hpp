// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Circuit data model and the matrix-level reduction pipeline: Maxwell-matrix
// reduction, cell composition, rotation into a basis containing every
// junction flux, two-pass kernel elimination and subsystem block extraction.
//
// All quantities are SI. Node-indexed matrices are laid out in lexicographic
// node order; reduced matrices list junction fluxes first.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lomq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

/// Relative tolerance for kernel membership, ||M s|| <= tol ||M|| ||s||.
inline constexpr double kKernelTolerance = 1e-9;
/// Relative eigenvalue floor below which a block counts as singular.
inline constexpr double kSingularTolerance = 1e-18;
/// Relative tolerance for symmetry and PSD checks.
inline constexpr double kSymmetryTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Maxwell matrices

/// Electrostatic capacitance matrix of one cell, referenced to infinity.
/// Off-diagonals hold -C_ij, row sums are self-capacitances to infinity.
struct MaxwellMatrix {
  std::vector<std::string> nodes;
  Matrix capacitance;  // farads

  std::optional<Eigen::Index> index_of(std::string_view node) const;
};

/// Describes the first violated Maxwell invariant, or nullopt when valid.
std::optional<std::string> maxwell_violation(const MaxwellMatrix& m);

/// Node-to-datum capacitance matrix: the datum row and column removed.
/// Throws UnknownDatum or MalformedMatrix.
Matrix reduce_maxwell(const MaxwellMatrix& m, std::string_view datum);

/// Inverse of reduce_maxwell given the per-node self-capacitances to infinity
/// (including the datum's, which goes first in the result).
MaxwellMatrix embed_maxwell(std::string datum, std::span<const std::string> nodes,
                            const Matrix& node_to_datum, const Vector& self_capacitance);

/// Short-circuits a group of nets into one node (e.g. ground-plane fragments).
/// The merged node takes the position of the first listed net.
MaxwellMatrix merge_nets(const MaxwellMatrix& m, std::span<const std::string> nets,
                         const std::string& merged_name);

// ---------------------------------------------------------------------------
// Partitions

struct SubsystemNodes {
  std::string name;
  std::vector<std::string> nodes;
};

struct CellNodes {
  std::string name;
  std::vector<std::string> nodes;  // may include the datum
};

/// Global node bookkeeping: the cell partition and the subsystem/coupler
/// partition of all non-datum nodes.
class NodeRegistry {
 public:
  static constexpr int kCoupler = -1;

  /// Throws InvalidPartition or UnknownNode when the partitions are inconsistent.
  NodeRegistry(std::string datum, std::vector<SubsystemNodes> subsystems,
               std::vector<std::string> couplers, std::vector<CellNodes> cells);

  const std::string& datum() const { return datum_; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  std::optional<std::size_t> index_of(std::string_view node) const;
  /// Throws UnknownNode.
  std::size_t require(std::string_view node) const;

  /// Subsystem index of a node, or kCoupler.
  int owner(std::size_t node_index) const { return owners_[node_index]; }
  const std::vector<int>& owners() const { return owners_; }
  bool is_coupler(std::size_t node_index) const { return owners_[node_index] == kCoupler; }

  const std::vector<SubsystemNodes>& subsystems() const { return subsystems_; }
  std::optional<std::size_t> subsystem_index(std::string_view name) const;
  const std::vector<std::string>& cells_of(std::size_t node_index) const { return cells_of_[node_index]; }

 private:
  std::string datum_;
  std::vector<std::string> nodes_;
  std::vector<int> owners_;
  std::vector<SubsystemNodes> subsystems_;
  std::vector<std::vector<std::string>> cells_of_;
};

// ---------------------------------------------------------------------------
// Elements and cells

enum class JunctionKind { Cosine, SymmetricSquid };

/// Non-linear inductive dipole. E(Phi) = -E_J(Phi_ext) cos(Phi / phi0), with
/// E_J(Phi_ext) = E_J for a single junction and E_J,max |cos(pi Phi_ext/Phi0)|
/// for a symmetric SQUID.
struct JunctionElement {
  std::string name;
  std::string node1;
  std::string node2;
  JunctionKind kind = JunctionKind::Cosine;
  double josephson_energy = 0.0;  // J; E_J or E_J,max
  double flux_bias = 0.0;         // Wb
  double inductance = 0.0;        // H, linear response at the bias point
  double capacitance = 0.0;       // F
  std::string subsystem;

  static JunctionElement from_inductance(std::string name, std::string node1, std::string node2,
                                         double inductance, double capacitance, std::string subsystem);
  static JunctionElement from_energy(std::string name, std::string node1, std::string node2,
                                     JunctionKind kind, double josephson_energy, double flux_bias,
                                     double capacitance, std::string subsystem);

  /// E_J at the bias point.
  double bias_josephson_energy() const;
  /// Throws MalformedMatrix when L_j is inconsistent with the energy function.
  void validate() const;
};

/// Josephson energy of a linear inductance, phi0^2 / L.
double josephson_energy_from_inductance(double inductance);
double josephson_inductance(double josephson_energy);

struct CellMatrices {
  std::string name;
  std::vector<std::string> nodes;  // non-datum nodes, matrix order
  Matrix capacitance;              // F
  Matrix inverse_inductance;       // 1/H
  std::vector<std::string> junctions;

  /// Throws DimensionMismatch or MalformedMatrix.
  void validate() const;
};

/// Cell holding only a Maxwell-derived capacitance matrix.
CellMatrices cell_from_maxwell(std::string name, const MaxwellMatrix& m, std::string_view datum);

/// Adds a two-terminal element of admittance-like value `value` between
/// matrix indices i and j; a missing index stands for the datum.
void stamp_two_terminal(Matrix& m, std::optional<Eigen::Index> i, std::optional<Eigen::Index> j,
                        double value);

struct CompositeNetlist {
  NodeRegistry registry;
  Matrix capacitance;         // C_n
  Matrix inverse_inductance;  // L_n^-1
  std::vector<JunctionElement> junctions;
};

/// Scatters every cell into global node order and stamps junction C_j, 1/L_j.
/// Throws DimensionMismatch or UnknownNode.
CompositeNetlist compose_cells(std::span<const CellMatrices> cells, NodeRegistry registry,
                               std::vector<JunctionElement> junctions);

// ---------------------------------------------------------------------------
// Reduction

/// Circuit matrices in a basis where every junction flux is a coordinate.
struct JunctionBasis {
  Matrix capacitance;
  Matrix inverse_inductance;
  std::vector<std::string> labels;  // junction names first, then remaining nodes
  std::vector<int> owners;          // subsystem index or NodeRegistry::kCoupler
  IntMatrix transform;              // S_n: Phi_n = S_n Phi
  IntMatrix inverse_transform;      // S_n^-1
  std::vector<std::size_t> junction_coordinates;
};

/// Throws DependentJunctionLoop when junction fluxes are linearly dependent.
JunctionBasis rotate_to_junction_basis(const CompositeNetlist& net);

/// Partition into eliminated directions S_r and retained identity columns S_k.
struct ConstraintBasis {
  Matrix eliminated;                         // N x r
  Matrix retained;                           // N x (N - r)
  std::vector<std::size_t> retained_coordinates;
};

/// Coupler-supported directions in ker(kernel_matrix) go to S_r; everything
/// subsystem-owned stays in S_k even when it is a null direction.
ConstraintBasis select_constraint_basis(const Matrix& kernel_matrix, std::span<const int> owners,
                                        double rel_tol = kKernelTolerance);

/// Explicit elimination directions; throws NonNullDirection when any column
/// is not in ker(kernel_matrix).
ConstraintBasis select_constraint_basis(const Matrix& kernel_matrix, const Matrix& requested,
                                        double rel_tol = kKernelTolerance);

/// Identity columns completing span(eliminated) to R^n, chosen by pivoting.
std::vector<std::size_t> complete_with_identity(const Matrix& eliminated, Eigen::Index n);

/// First pass: C_k = S_k^T (C - C S_r (S_r^T C S_r)^-1 S_r^T C) S_k and
/// L_k^-1 = S_k^T L^-1 S_k. Throws SingularCouplerBlock or NonNullDirection.
std::pair<Matrix, Matrix> schur_eliminate(const Matrix& capacitance, const Matrix& inverse_inductance,
                                          const Matrix& eliminated, const Matrix& retained);

struct SecondPass {
  Matrix capacitance;
  Matrix inverse_inductance;
  ConstraintBasis basis;
};

/// Mirror of the first pass for coupler directions in ker(C_k), condensed out
/// of L_k^-1. Identity when no such direction exists.
SecondPass second_pass_eliminate(const Matrix& capacitance, const Matrix& inverse_inductance,
                                 std::span<const int> owners);

struct ReducedCircuit {
  std::vector<std::string> labels;  // retained coordinates, junction fluxes first
  std::vector<int> owners;
  std::vector<std::string> subsystem_names;
  Matrix capacitance;                // C_k
  Matrix inverse_inductance;         // L_k^-1
  Matrix linear_inverse_inductance;  // L_k'^-1, junction 1/L_j removed
  std::vector<std::vector<std::size_t>> blocks;  // subsystem -> coordinates
  IntMatrix node_transform;
  ConstraintBasis first_pass;
  ConstraintBasis second_pass;
  std::vector<std::string> eliminated;
  std::vector<std::string> warnings;

  std::optional<std::size_t> index_of(std::string_view label) const;
};

/// Rotation, both elimination passes and junction-inductance removal.
ReducedCircuit reduce_circuit(const CompositeNetlist& net);

struct SubsystemBlock {
  std::string name;
  std::vector<std::string> coordinates;
  Matrix inverse_capacitance;
  Matrix inverse_inductance;
};

/// One cross-subsystem coordinate pair. Both values carry the factor of two
/// from splitting the symmetric quadratic form: 1/C_nm^eff = 2 [C_k^-1]_nm.
struct CouplingEntry {
  std::size_t subsystem_a = 0;
  std::size_t subsystem_b = 0;
  std::string coordinate_a;
  std::string coordinate_b;
  double inverse_capacitance = 0.0;
  double inverse_inductance = 0.0;
};

struct BlockExtraction {
  Matrix inverse_capacitance;  // C_k^-1
  std::vector<SubsystemBlock> subsystems;
  std::vector<CouplingEntry> couplings;
  std::vector<std::string> labels;

  /// Diagonal entry of C_k^-1 for one coordinate, e.g. 1/C_J^eff.
  double port_inverse_capacitance(std::string_view label) const;
};

/// Inverts C_k and partitions it. Throws SingularCouplerBlock when C_k is singular.
BlockExtraction extract_blocks(const ReducedCircuit& rc);
BlockExtraction extract_blocks(const ReducedCircuit& rc, const Matrix& inverse_capacitance);

/// Angular frequencies of the non-zero normal modes of L^-1 x = w^2 C x,
/// ascending. C must be positive definite.
Vector normal_mode_frequencies(const Matrix& capacitance, const Matrix& inverse_inductance);

}  // namespace lomq
