// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Truncated tensor-product Hamiltonian of coupled subsystems, its dense
// diagonalization, dressed-state labeling and dispersive observables.
//
// Factor order is the concatenation of every subsystem's factors; the first
// factor is the most significant digit of the product index.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lomq/netlist.hpp"
#include "lomq/subsystems.hpp"

namespace lomq {

inline constexpr std::size_t kDefaultMaxDimension = 20000;
/// Minimum squared overlap for a dressed state to inherit a bare label.
inline constexpr double kLabelOverlap = 0.5;

/// Port-to-port coupling between two subsystems. Both values are the
/// doubled off-diagonal entries 1/C_nm^eff and 1/L_nm^eff.
struct CouplingEdge {
  std::size_t subsystem_a = 0;
  std::size_t subsystem_b = 0;
  std::string port_a;
  std::string port_b;
  double inverse_capacitance = 0.0;
  double inverse_inductance = 0.0;
};

/// Edges are stored with subsystem_a < subsystem_b; zero edges are dropped.
class CouplingGraph {
 public:
  CouplingGraph() = default;
  static CouplingGraph from_blocks(const BlockExtraction& blocks);

  void add(CouplingEdge edge);
  const std::vector<CouplingEdge>& edges() const { return edges_; }
  std::optional<CouplingEdge> find(std::size_t a, const std::string& port_a, std::size_t b,
                                   const std::string& port_b) const;
  /// Copy keeping only edges for which keep(edge) is true.
  template <typename Predicate>
  CouplingGraph filtered(Predicate keep) const {
    CouplingGraph out;
    for (const auto& e : edges_) {
      if (keep(e)) out.edges_.push_back(e);
    }
    return out;
  }

 private:
  std::vector<CouplingEdge> edges_;
};

/// One product operator in the pair Hamiltonian: strength * A (x) B.
struct InteractionTerm {
  std::size_t factor_a = 0;  // global factor indices
  std::size_t factor_b = 0;
  double strength = 0.0;  // 1/2 * (1/C_eff) or 1/2 * (1/L_eff)
  ComplexMatrix op_a;
  ComplexMatrix op_b;
};

struct FactorInfo {
  std::string label;
  std::size_t subsystem = 0;
  std::size_t local = 0;
  Eigen::VectorXd energies;
};

struct CompositeHamiltonian {
  std::vector<FactorInfo> factors;
  std::vector<std::size_t> dims;
  std::vector<InteractionTerm> terms;
  ComplexMatrix matrix;  // J

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t factor_index(const std::string& label) const;
};

/// Bare sum plus 1/2 (Q_n Q_m / C_nm^eff + Phi_n Phi_m / L_nm^eff) per edge,
/// which reproduces 1/2 Q^T C^-1 Q exactly. Throws DimensionOverflow, and
/// Unsupported for flux coupling to a transmon port or an unknown port.
CompositeHamiltonian build_full_hamiltonian(std::span<const QuantizedSubsystem> subsystems,
                                            const CouplingGraph& graph,
                                            std::size_t max_dimension = kDefaultMaxDimension);

using Label = std::vector<int>;

struct DressedSpectrum {
  Eigen::VectorXd energies;  // J, ascending
  std::vector<std::size_t> dims;
  std::vector<std::string> factor_labels;
  std::map<Label, std::size_t> labels;  // bare multi-index -> eigen index
  std::map<Label, double> overlaps;     // squared overlap of each label
  std::vector<std::string> diagnostics;  // ground-state labeling problems
  Eigen::VectorXd best_overlap;  // per bare product state, max over dressed states
  std::size_t unlabeled = 0;  // states without a bare label, usually near the truncation edge
  bool real_solver = false;

  std::optional<double> energy(const Label& label) const;
  /// Throws UnlabeledState.
  double require(const Label& label) const;
  Label excitation(std::initializer_list<std::pair<std::size_t, int>> levels) const;
};

DressedSpectrum diagonalize(const CompositeHamiltonian& h);

struct DispersiveObservables {
  std::vector<std::string> factor_labels;
  Eigen::VectorXd frequencies;     // Hz, NaN when unlabeled
  Eigen::VectorXd anharmonicities;  // Hz, NaN when fewer than 3 levels
  Eigen::MatrixXd chi;              // Hz, E11 - E10 - E01 + E00
  std::size_t qubit = 0;
  std::size_t readout = 0;
  double qubit_frequency = 0.0;
  double readout_frequency = 0.0;
  double qubit_anharmonicity = 0.0;
  double chi_qr = 0.0;
};

/// Throws UnlabeledState when a label needed for the qubit/readout pair is missing.
DispersiveObservables extract_dispersive(const DressedSpectrum& spectrum, std::size_t qubit_factor,
                                         std::size_t readout_factor);

}  // namespace lomq
