// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"
#include "lomq/linalg.hpp"

namespace lomq {
namespace {

using Index = Eigen::Index;

std::vector<Index> to_index(std::span<const std::size_t> v) { return {v.begin(), v.end()}; }

// Row sums may dip below zero by extraction noise; this is the allowance
// relative to the largest diagonal entry.
constexpr double kRowSumAllowance = 1e-6;

std::string describe_direction(const Vector& v, std::span<const std::string> labels) {
  std::ostringstream out;
  bool first = true;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) < 1e-12) continue;
    if (!first) out << (v(i) < 0 ? " - " : " + ");
    else if (v(i) < 0) out << "-";
    const double mag = std::abs(v(i));
    if (std::abs(mag - 1.0) > 1e-12) out << mag << "*";
    out << labels[static_cast<std::size_t>(i)];
    first = false;
  }
  return out.str();
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

// ---------------------------------------------------------------------------
// Maxwell matrices

std::optional<Eigen::Index> MaxwellMatrix::index_of(std::string_view node) const {
  const auto it = std::find(nodes.begin(), nodes.end(), node);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<Index>(it - nodes.begin());
}

std::optional<std::string> maxwell_violation(const MaxwellMatrix& m) {
  const auto n = static_cast<Index>(m.nodes.size());
  if (n == 0) return "empty matrix";
  if (m.capacitance.rows() != n || m.capacitance.cols() != n) {
    return "matrix is " + std::to_string(m.capacitance.rows()) + "x" +
           std::to_string(m.capacitance.cols()) + " but has " + std::to_string(n) + " node names";
  }
  if (std::set<std::string>(m.nodes.begin(), m.nodes.end()).size() != m.nodes.size()) {
    return "duplicate node names";
  }
  if (!m.capacitance.allFinite()) return "non-finite entries";
  if (!linalg::is_symmetric(m.capacitance, kSymmetryTolerance)) return "matrix is not symmetric";
  const double scale = linalg::max_abs(m.capacitance);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && m.capacitance(i, j) > kSymmetryTolerance * scale) {
        return "positive off-diagonal entry between " + m.nodes[i] + " and " + m.nodes[j];
      }
    }
  }
  const double allowance = kRowSumAllowance * m.capacitance.diagonal().cwiseAbs().maxCoeff();
  for (Index i = 0; i < n; ++i) {
    if (m.capacitance.row(i).sum() < -allowance) {
      return "negative self-capacitance (row sum) for node " + m.nodes[i];
    }
  }
  return std::nullopt;
}

Matrix reduce_maxwell(const MaxwellMatrix& m, std::string_view datum) {
  const auto datum_index = m.index_of(datum);
  if (!datum_index) throw Error(ErrorCode::UnknownDatum, "datum '" + std::string(datum) + "' not in matrix");
  if (auto violation = maxwell_violation(m)) throw Error(ErrorCode::MalformedMatrix, *violation);
  std::vector<Index> keep;
  for (Index i = 0; i < static_cast<Index>(m.nodes.size()); ++i) {
    if (i != *datum_index) keep.push_back(i);
  }
  return m.capacitance(keep, keep);
}

MaxwellMatrix embed_maxwell(std::string datum, std::span<const std::string> nodes,
                            const Matrix& node_to_datum, const Vector& self_capacitance) {
  const auto n = static_cast<Index>(nodes.size());
  if (node_to_datum.rows() != n || node_to_datum.cols() != n || self_capacitance.size() != n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "embed_maxwell: inconsistent dimensions");
  }
  MaxwellMatrix out;
  out.nodes.push_back(std::move(datum));
  out.nodes.insert(out.nodes.end(), nodes.begin(), nodes.end());
  out.capacitance = Matrix::Zero(n + 1, n + 1);
  out.capacitance.bottomRightCorner(n, n) = node_to_datum;
  for (Index i = 0; i < n; ++i) {
    const double to_datum = self_capacitance(i + 1) - node_to_datum.row(i).sum();
    out.capacitance(0, i + 1) = to_datum;
    out.capacitance(i + 1, 0) = to_datum;
  }
  out.capacitance(0, 0) = self_capacitance(0) - out.capacitance.row(0).tail(n).sum();
  return out;
}

MaxwellMatrix merge_nets(const MaxwellMatrix& m, std::span<const std::string> nets,
                         const std::string& merged_name) {
  if (nets.empty()) return m;
  std::vector<Index> members;
  for (const auto& net : nets) {
    const auto idx = m.index_of(net);
    if (!idx) throw Error(ErrorCode::UnknownNode, "net '" + net + "' not in Maxwell matrix");
    members.push_back(*idx);
  }
  const Index first = *std::min_element(members.begin(), members.end());
  const auto old_n = static_cast<Index>(m.nodes.size());
  MaxwellMatrix out;
  std::vector<Index> new_index(static_cast<std::size_t>(old_n), -1);
  for (Index i = 0; i < old_n; ++i) {
    const bool member = std::find(members.begin(), members.end(), i) != members.end();
    if (member && i != first) continue;
    new_index[i] = static_cast<Index>(out.nodes.size());
    out.nodes.push_back(member ? merged_name : m.nodes[i]);
  }
  for (Index i : members) new_index[i] = new_index[first];
  Matrix incidence = Matrix::Zero(old_n, static_cast<Index>(out.nodes.size()));
  for (Index i = 0; i < old_n; ++i) incidence(i, new_index[i]) = 1.0;
  out.capacitance = incidence.transpose() * m.capacitance * incidence;
  return out;
}

// ---------------------------------------------------------------------------
// NodeRegistry

NodeRegistry::NodeRegistry(std::string datum, std::vector<SubsystemNodes> subsystems,
                           std::vector<std::string> couplers, std::vector<CellNodes> cells)
    : datum_(std::move(datum)), subsystems_(std::move(subsystems)) {
  if (datum_.empty()) throw Error(ErrorCode::InvalidPartition, "empty datum name");
  std::map<std::string, int> owner_of;
  std::set<std::string> names;
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    const auto& sub = subsystems_[k];
    if (sub.name.empty() || !names.insert(sub.name).second) {
      throw Error(ErrorCode::InvalidPartition, "subsystem names must be unique and non-empty");
    }
    for (const auto& node : sub.nodes) {
      if (node == datum_) throw Error(ErrorCode::InvalidPartition, "datum listed in subsystem " + sub.name);
      if (!owner_of.emplace(node, static_cast<int>(k)).second) {
        throw Error(ErrorCode::InvalidPartition, "node " + node + " assigned to more than one set");
      }
    }
  }
  for (const auto& node : couplers) {
    if (node == datum_) throw Error(ErrorCode::InvalidPartition, "datum listed as coupler");
    if (!owner_of.emplace(node, kCoupler).second) {
      throw Error(ErrorCode::InvalidPartition, "node " + node + " assigned to more than one set");
    }
  }
  for (const auto& [node, owner] : owner_of) {
    nodes_.push_back(node);
    owners_.push_back(owner);
  }
  cells_of_.resize(nodes_.size());
  for (const auto& cell : cells) {
    for (const auto& node : cell.nodes) {
      if (node == datum_) continue;
      const auto idx = index_of(node);
      if (!idx) {
        throw Error(ErrorCode::UnknownNode,
                    "node " + node + " of cell " + cell.name + " is neither a subsystem nor a coupler node");
      }
      auto& list = cells_of_[*idx];
      if (std::find(list.begin(), list.end(), cell.name) == list.end()) list.push_back(cell.name);
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (cells_of_[i].empty()) {
      throw Error(ErrorCode::InvalidPartition, "node " + nodes_[i] + " belongs to no cell");
    }
  }
}

std::optional<std::size_t> NodeRegistry::index_of(std::string_view node) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end() || *it != node) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t NodeRegistry::require(std::string_view node) const {
  if (auto idx = index_of(node)) return *idx;
  throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(node) + "'");
}

std::optional<std::size_t> NodeRegistry::subsystem_index(std::string_view name) const {
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    if (subsystems_[k].name == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Junctions

double josephson_energy_from_inductance(double inductance) {
  return constants::reduced_flux_quantum * constants::reduced_flux_quantum / inductance;
}

double josephson_inductance(double josephson_energy) {
  return constants::reduced_flux_quantum * constants::reduced_flux_quantum / josephson_energy;
}

JunctionElement JunctionElement::from_inductance(std::string name, std::string node1, std::string node2,
                                                 double inductance, double capacitance, std::string subsystem) {
  if (!(inductance > 0)) throw Error(ErrorCode::ConfigError, "junction " + name + ": inductance must be positive");
  JunctionElement j;
  j.name = std::move(name);
  j.node1 = std::move(node1);
  j.node2 = std::move(node2);
  j.kind = JunctionKind::Cosine;
  j.inductance = inductance;
  j.josephson_energy = josephson_energy_from_inductance(inductance);
  j.capacitance = capacitance;
  j.subsystem = std::move(subsystem);
  j.validate();
  return j;
}

JunctionElement JunctionElement::from_energy(std::string name, std::string node1, std::string node2,
                                             JunctionKind kind, double josephson_energy, double flux_bias,
                                             double capacitance, std::string subsystem) {
  JunctionElement j;
  j.name = std::move(name);
  j.node1 = std::move(node1);
  j.node2 = std::move(node2);
  j.kind = kind;
  j.josephson_energy = josephson_energy;
  j.flux_bias = flux_bias;
  j.capacitance = capacitance;
  j.subsystem = std::move(subsystem);
  const double bias = j.bias_josephson_energy();
  if (!(bias > 0)) {
    throw Error(ErrorCode::ConfigError, "junction " + j.name + ": Josephson energy vanishes at the bias point");
  }
  j.inductance = josephson_inductance(bias);
  j.validate();
  return j;
}

double JunctionElement::bias_josephson_energy() const {
  switch (kind) {
    case JunctionKind::Cosine: return josephson_energy;
    case JunctionKind::SymmetricSquid:
      return josephson_energy * std::abs(std::cos(std::numbers::pi * flux_bias / constants::flux_quantum));
  }
  return josephson_energy;
}

void JunctionElement::validate() const {
  if (node1 == node2) throw Error(ErrorCode::MalformedMatrix, "junction " + name + " shorts a node to itself");
  if (!(capacitance >= 0)) throw Error(ErrorCode::MalformedMatrix, "junction " + name + ": negative C_j");
  if (!(inductance > 0)) throw Error(ErrorCode::MalformedMatrix, "junction " + name + ": non-positive L_j");
  const double expected = josephson_inductance(bias_josephson_energy());
  if (std::abs(inductance - expected) > 1e-9 * expected) {
    throw Error(ErrorCode::MalformedMatrix, "junction " + name + ": L_j inconsistent with E_J at bias");
  }
}

// ---------------------------------------------------------------------------
// Cells

void CellMatrices::validate() const {
  const auto n = static_cast<Index>(nodes.size());
  if (capacitance.rows() != n || capacitance.cols() != n || inverse_inductance.rows() != n ||
      inverse_inductance.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "cell " + name + ": matrix size does not match node count");
  }
  if (!linalg::is_symmetric(capacitance, kSymmetryTolerance) ||
      !linalg::is_symmetric(inverse_inductance, kSymmetryTolerance)) {
    throw Error(ErrorCode::MalformedMatrix, "cell " + name + ": matrices must be symmetric");
  }
  if (n > 0 && !linalg::is_positive_semidefinite(capacitance, kSymmetryTolerance)) {
    throw Error(ErrorCode::MalformedMatrix, "cell " + name + ": capacitance matrix is not PSD");
  }
}

CellMatrices cell_from_maxwell(std::string name, const MaxwellMatrix& m, std::string_view datum) {
  CellMatrices cell;
  cell.name = std::move(name);
  cell.capacitance = reduce_maxwell(m, datum);
  for (const auto& node : m.nodes) {
    if (node != datum) cell.nodes.push_back(node);
  }
  const auto n = static_cast<Index>(cell.nodes.size());
  cell.inverse_inductance = Matrix::Zero(n, n);
  return cell;
}

void stamp_two_terminal(Matrix& m, std::optional<Index> i, std::optional<Index> j, double value) {
  if (i) m(*i, *i) += value;
  if (j) m(*j, *j) += value;
  if (i && j) {
    m(*i, *j) -= value;
    m(*j, *i) -= value;
  }
}

CompositeNetlist compose_cells(std::span<const CellMatrices> cells, NodeRegistry registry,
                               std::vector<JunctionElement> junctions) {
  const auto n = static_cast<Index>(registry.size());
  Matrix c = Matrix::Zero(n, n);
  Matrix linv = Matrix::Zero(n, n);
  std::set<std::string> junction_names;
  for (const auto& j : junctions) junction_names.insert(j.name);

  for (const auto& cell : cells) {
    cell.validate();
    std::vector<Index> map;
    for (const auto& node : cell.nodes) {
      if (node == registry.datum()) {
        throw Error(ErrorCode::DimensionMismatch, "cell " + cell.name + " lists the datum as a matrix node");
      }
      map.push_back(static_cast<Index>(registry.require(node)));
    }
    c(map, map) += cell.capacitance;
    linv(map, map) += cell.inverse_inductance;
    for (const auto& ref : cell.junctions) {
      if (!junction_names.count(ref)) {
        throw Error(ErrorCode::UnknownNode, "cell " + cell.name + " references unknown junction " + ref);
      }
    }
  }

  auto terminal = [&](const std::string& node) -> std::optional<Index> {
    if (node == registry.datum()) return std::nullopt;
    return static_cast<Index>(registry.require(node));
  };
  for (const auto& j : junctions) {
    j.validate();
    if (!registry.subsystem_index(j.subsystem)) {
      throw Error(ErrorCode::InvalidPartition, "junction " + j.name + " assigned to unknown subsystem '" +
                                                   j.subsystem + "'");
    }
    const auto a = terminal(j.node1);
    const auto b = terminal(j.node2);
    stamp_two_terminal(c, a, b, j.capacitance);
    stamp_two_terminal(linv, a, b, 1.0 / j.inductance);
  }

  if (n > 0 && !linalg::is_positive_semidefinite(c, kSymmetryTolerance)) {
    throw Error(ErrorCode::MalformedMatrix, "composite capacitance matrix is not PSD");
  }
  return CompositeNetlist{std::move(registry), linalg::symmetrized(c), linalg::symmetrized(linv),
                          std::move(junctions)};
}

// ---------------------------------------------------------------------------
// Junction basis

JunctionBasis rotate_to_junction_basis(const CompositeNetlist& net) {
  const auto& reg = net.registry;
  const std::size_t n = reg.size();
  const std::size_t datum = n;  // virtual index
  auto index = [&](const std::string& node) { return node == reg.datum() ? datum : reg.require(node); };

  struct Edge {
    std::size_t a, b;  // node1, node2
  };
  std::vector<Edge> edges;
  UnionFind uf(n + 1);
  for (const auto& j : net.junctions) {
    const Edge e{index(j.node1), index(j.node2)};
    if (e.a == e.b || uf.find(e.a) == uf.find(e.b)) {
      throw Error(ErrorCode::DependentJunctionLoop,
                  "junction " + j.name + " closes a loop of junctions; its flux is not independent");
    }
    uf.unite(e.a, e.b);
    edges.push_back(e);
  }

  // Root each junction tree at the datum when present, else at node1 of its
  // first junction; every junction then owns its child terminal as pivot.
  std::vector<std::size_t> pivot(edges.size(), datum);
  std::vector<bool> visited(n + 1, false);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (pivot[k] != datum) continue;
    const std::size_t root = uf.find(datum) == uf.find(edges[k].a) ? datum : edges[k].a;
    std::queue<std::size_t> frontier;
    frontier.push(root);
    visited[root] = true;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (pivot[e] != datum) continue;
        std::size_t v;
        if (edges[e].a == u) v = edges[e].b;
        else if (edges[e].b == u) v = edges[e].a;
        else continue;
        if (visited[v]) continue;
        visited[v] = true;
        pivot[e] = v;
        frontier.push(v);
      }
    }
  }

  // Coordinate order: junction pivots in junction order, then the rest.
  std::vector<std::size_t> order;
  std::vector<bool> is_pivot(n, false);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    order.push_back(pivot[k]);
    is_pivot[pivot[k]] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_pivot[i]) order.push_back(i);
  }

  const auto ni = static_cast<Index>(n);
  IntMatrix inverse = IntMatrix::Zero(ni, ni);  // Phi = inverse * Phi_n
  JunctionBasis out;
  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t node = order[row];
    if (row < edges.size()) {
      const auto& e = edges[row];
      if (e.b != datum) inverse(static_cast<Index>(row), static_cast<Index>(e.b)) += 1;
      if (e.a != datum) inverse(static_cast<Index>(row), static_cast<Index>(e.a)) -= 1;
      out.labels.push_back(net.junctions[row].name);
      const auto owner = reg.subsystem_index(net.junctions[row].subsystem);
      if (!owner) {
        throw Error(ErrorCode::InvalidPartition, "junction " + net.junctions[row].name + " has unknown subsystem");
      }
      out.owners.push_back(static_cast<int>(*owner));
      out.junction_coordinates.push_back(row);
    } else {
      inverse(static_cast<Index>(row), static_cast<Index>(node)) = 1;
      out.labels.push_back(reg.nodes()[node]);
      out.owners.push_back(reg.owner(node));
    }
  }

  const Matrix inverse_d = inverse.cast<double>();
  const Matrix transform_d = inverse_d.fullPivLu().inverse();
  const IntMatrix transform = transform_d.array().round().cast<int>().matrix();
  if ((inverse * transform - IntMatrix::Identity(ni, ni)).cwiseAbs().maxCoeff() != 0) {
    throw Error(ErrorCode::DependentJunctionLoop, "junction basis transformation is not unimodular");
  }
  const Matrix s = transform.cast<double>();
  out.transform = transform;
  out.inverse_transform = inverse;
  out.capacitance = linalg::symmetrized(Matrix(s.transpose() * net.capacitance * s));
  out.inverse_inductance = linalg::symmetrized(Matrix(s.transpose() * net.inverse_inductance * s));
  return out;
}

// ---------------------------------------------------------------------------
// Constraint bases

std::vector<std::size_t> complete_with_identity(const Matrix& eliminated, Index n) {
  const Index r = eliminated.cols();
  std::vector<std::size_t> chosen;
  if (r == 0) {
    chosen.resize(static_cast<std::size_t>(n));
    std::iota(chosen.begin(), chosen.end(), 0);
    return chosen;
  }
  Eigen::HouseholderQR<Matrix> qr(eliminated);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, r);
  const Matrix residual = Matrix::Identity(n, n) - q * q.transpose();
  Eigen::ColPivHouseholderQR<Matrix> pivoted(residual);
  const auto& perm = pivoted.colsPermutation().indices();
  for (Index k = 0; k < n - r; ++k) chosen.push_back(static_cast<std::size_t>(perm(k)));
  std::sort(chosen.begin(), chosen.end());

  Matrix full(n, n);
  full << eliminated, Matrix::Identity(n, n)(Eigen::all, to_index(chosen));
  if (full.fullPivLu().rank() != n) {
    throw Error(ErrorCode::NonNullDirection, "could not complete elimination directions to a basis");
  }
  return chosen;
}

namespace {

ConstraintBasis make_basis(Matrix eliminated, Index n) {
  ConstraintBasis basis;
  basis.retained_coordinates = complete_with_identity(eliminated, n);
  basis.retained = Matrix::Identity(n, n)(Eigen::all, to_index(basis.retained_coordinates));
  basis.eliminated = std::move(eliminated);
  return basis;
}

}  // namespace

ConstraintBasis select_constraint_basis(const Matrix& kernel_matrix, std::span<const int> owners,
                                        double rel_tol) {
  const Index n = kernel_matrix.rows();
  const double norm = linalg::symmetric_norm(kernel_matrix);

  std::vector<Index> unit_kernel;
  std::vector<Index> remaining;
  for (Index i = 0; i < n; ++i) {
    if (owners[static_cast<std::size_t>(i)] != NodeRegistry::kCoupler) continue;
    if (linalg::in_kernel(kernel_matrix, Vector::Unit(n, i), norm, rel_tol)) unit_kernel.push_back(i);
    else remaining.push_back(i);
  }
  Matrix mixed(n, 0);
  if (!remaining.empty()) {
    const Matrix null = linalg::null_space(Matrix(kernel_matrix(Eigen::all, remaining)), rel_tol * norm);
    mixed = Matrix::Zero(n, null.cols());
    mixed(remaining, Eigen::all) = null;
  }
  Matrix eliminated(n, static_cast<Index>(unit_kernel.size()) + mixed.cols());
  for (std::size_t k = 0; k < unit_kernel.size(); ++k) {
    eliminated.col(static_cast<Index>(k)) = Vector::Unit(n, unit_kernel[k]);
  }
  eliminated.rightCols(mixed.cols()) = mixed;
  return make_basis(std::move(eliminated), n);
}

ConstraintBasis select_constraint_basis(const Matrix& kernel_matrix, const Matrix& requested, double rel_tol) {
  if (requested.rows() != kernel_matrix.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "elimination directions have the wrong length");
  }
  const double norm = linalg::symmetric_norm(kernel_matrix);
  for (Index k = 0; k < requested.cols(); ++k) {
    if (!linalg::in_kernel(kernel_matrix, requested.col(k), norm, rel_tol)) {
      throw Error(ErrorCode::NonNullDirection, "requested direction " + std::to_string(k) + " is not a null direction");
    }
  }
  return make_basis(requested, kernel_matrix.rows());
}

std::pair<Matrix, Matrix> schur_eliminate(const Matrix& capacitance, const Matrix& inverse_inductance,
                                          const Matrix& eliminated, const Matrix& retained) {
  const double norm = linalg::symmetric_norm(inverse_inductance);
  for (Index k = 0; k < eliminated.cols(); ++k) {
    if (!linalg::in_kernel(inverse_inductance, eliminated.col(k), norm, kKernelTolerance)) {
      throw Error(ErrorCode::NonNullDirection, "elimination direction carries inductive energy");
    }
  }
  Matrix c = linalg::schur_reduce(capacitance, eliminated, retained, kSingularTolerance);
  Matrix l = linalg::symmetrized(Matrix(retained.transpose() * inverse_inductance * retained));
  return {std::move(c), std::move(l)};
}

SecondPass second_pass_eliminate(const Matrix& capacitance, const Matrix& inverse_inductance,
                                 std::span<const int> owners) {
  SecondPass out;
  out.basis = select_constraint_basis(capacitance, owners, kKernelTolerance);
  if (out.basis.eliminated.cols() == 0) {
    out.capacitance = capacitance;
    out.inverse_inductance = inverse_inductance;
    return out;
  }
  const auto& r = out.basis.eliminated;
  const auto& k = out.basis.retained;
  out.inverse_inductance = linalg::schur_reduce(inverse_inductance, r, k, kSingularTolerance);
  out.capacitance = linalg::symmetrized(Matrix(k.transpose() * capacitance * k));
  return out;
}

// ---------------------------------------------------------------------------
// Full reduction

std::optional<std::size_t> ReducedCircuit::index_of(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

ReducedCircuit reduce_circuit(const CompositeNetlist& net) {
  ReducedCircuit rc;
  const auto& reg = net.registry;
  for (const auto& sub : reg.subsystems()) rc.subsystem_names.push_back(sub.name);

  // Junctions are rotated onto their own coordinates, so only linear
  // inductors can make a coupler node dynamical.
  Matrix linear = net.inverse_inductance;
  for (const auto& j : net.junctions) {
    auto node = [&](const std::string& n) -> std::optional<Index> {
      if (n == reg.datum()) return std::nullopt;
      return static_cast<Index>(reg.require(n));
    };
    stamp_two_terminal(linear, node(j.node1), node(j.node2), -1.0 / j.inductance);
  }
  const double c_scale = linalg::max_abs(net.capacitance);
  const double l_scale = linalg::max_abs(net.inverse_inductance);
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (!reg.is_coupler(i)) continue;
    const auto row = static_cast<Index>(i);
    const bool capacitive = c_scale > 0 && net.capacitance.row(row).cwiseAbs().maxCoeff() > 1e-12 * c_scale;
    const bool inductive = l_scale > 0 && linear.row(row).cwiseAbs().maxCoeff() > 1e-12 * l_scale;
    if (capacitive && inductive) {
      rc.warnings.push_back("coupler node " + reg.nodes()[i] +
                            " is touched by both capacitive and inductive elements and may be dynamical");
    }
  }

  const JunctionBasis jb = rotate_to_junction_basis(net);
  rc.node_transform = jb.transform;

  rc.first_pass = select_constraint_basis(jb.inverse_inductance, jb.owners, kKernelTolerance);
  auto [c1, l1] = schur_eliminate(jb.capacitance, jb.inverse_inductance, rc.first_pass.eliminated,
                                  rc.first_pass.retained);
  for (Index k = 0; k < rc.first_pass.eliminated.cols(); ++k) {
    rc.eliminated.push_back(describe_direction(rc.first_pass.eliminated.col(k), jb.labels));
  }
  std::vector<std::string> labels1;
  std::vector<int> owners1;
  for (auto i : rc.first_pass.retained_coordinates) {
    labels1.push_back(jb.labels[i]);
    owners1.push_back(jb.owners[i]);
  }

  SecondPass pass2 = second_pass_eliminate(c1, l1, owners1);
  rc.second_pass = pass2.basis;
  for (Index k = 0; k < pass2.basis.eliminated.cols(); ++k) {
    rc.eliminated.push_back(describe_direction(pass2.basis.eliminated.col(k), labels1));
  }
  for (auto i : pass2.basis.retained_coordinates) {
    rc.labels.push_back(labels1[i]);
    rc.owners.push_back(owners1[i]);
  }
  rc.capacitance = std::move(pass2.capacitance);
  rc.inverse_inductance = std::move(pass2.inverse_inductance);

  for (std::size_t i = 0; i < rc.labels.size(); ++i) {
    if (rc.owners[i] == NodeRegistry::kCoupler) {
      rc.warnings.push_back("coupler coordinate " + rc.labels[i] +
                            " is not a null direction and was retained; it enters no subsystem block");
    }
  }

  const auto [lo, hi] = linalg::eigen_range(rc.capacitance);
  if (rc.capacitance.size() > 0 && (!(hi > 0) || lo <= kSingularTolerance * hi)) {
    throw Error(ErrorCode::SingularCouplerBlock, "reduced capacitance matrix is singular");
  }

  rc.linear_inverse_inductance = rc.inverse_inductance;
  for (const auto& j : net.junctions) {
    const auto idx = rc.index_of(j.name);
    if (!idx) throw Error(ErrorCode::InvalidPartition, "junction flux " + j.name + " was eliminated");
    const auto d = static_cast<Index>(*idx);
    rc.linear_inverse_inductance(d, d) -= 1.0 / j.inductance;
  }
  // Exact cancellation leaves rounding residue on the order of 1/L_j * eps.
  for (const auto& j : net.junctions) {
    const auto d = static_cast<Index>(*rc.index_of(j.name));
    if (std::abs(rc.linear_inverse_inductance(d, d)) < 1e-12 / j.inductance) {
      rc.linear_inverse_inductance(d, d) = 0.0;
    }
  }

  rc.blocks.resize(reg.subsystems().size());
  for (std::size_t i = 0; i < rc.owners.size(); ++i) {
    if (rc.owners[i] >= 0) rc.blocks[static_cast<std::size_t>(rc.owners[i])].push_back(i);
  }
  return rc;
}

BlockExtraction extract_blocks(const ReducedCircuit& rc) {
  const auto [lo, hi] = linalg::eigen_range(rc.capacitance);
  if (rc.capacitance.size() > 0 && (!(hi > 0) || lo <= kSingularTolerance * hi)) {
    throw Error(ErrorCode::SingularCouplerBlock, "reduced capacitance matrix is singular");
  }
  const Index n = rc.capacitance.rows();
  const Matrix inverse = linalg::symmetrized(Matrix(rc.capacitance.ldlt().solve(Matrix::Identity(n, n))));
  return extract_blocks(rc, inverse);
}

BlockExtraction extract_blocks(const ReducedCircuit& rc, const Matrix& inverse_capacitance) {
  BlockExtraction out;
  out.inverse_capacitance = inverse_capacitance;
  out.labels = rc.labels;
  for (std::size_t s = 0; s < rc.blocks.size(); ++s) {
    SubsystemBlock block;
    block.name = s < rc.subsystem_names.size() ? rc.subsystem_names[s] : std::to_string(s);
    const auto idx = to_index(rc.blocks[s]);
    for (auto i : rc.blocks[s]) block.coordinates.push_back(rc.labels[i]);
    block.inverse_capacitance = inverse_capacitance(idx, idx);
    block.inverse_inductance = rc.linear_inverse_inductance(idx, idx);
    out.subsystems.push_back(std::move(block));
  }
  const std::size_t n = rc.labels.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const int oa = rc.owners[a];
      const int ob = rc.owners[b];
      if (oa < 0 || ob < 0 || oa == ob) continue;
      const auto ia = static_cast<Index>(a);
      const auto ib = static_cast<Index>(b);
      out.couplings.push_back(CouplingEntry{static_cast<std::size_t>(oa), static_cast<std::size_t>(ob),
                                            rc.labels[a], rc.labels[b], 2.0 * inverse_capacitance(ia, ib),
                                            2.0 * rc.linear_inverse_inductance(ia, ib)});
    }
  }
  return out;
}

double BlockExtraction::port_inverse_capacitance(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error(ErrorCode::UnknownNode, "no retained coordinate '" + std::string(label) + "'");
  const auto i = static_cast<Index>(it - labels.begin());
  return inverse_capacitance(i, i);
}

Vector normal_mode_frequencies(const Matrix& capacitance, const Matrix& inverse_inductance) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(inverse_inductance, capacitance);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularCouplerBlock, "generalized eigenproblem failed (capacitance not PD?)");
  }
  const Vector& w2 = solver.eigenvalues();
  const double top = w2.size() ? w2.cwiseAbs().maxCoeff() : 0.0;
  std::vector<double> out;
  for (Index i = 0; i < w2.size(); ++i) {
    if (w2(i) > 1e-10 * top) out.push_back(std::sqrt(w2(i)));
  }
  std::sort(out.begin(), out.end());
  return Eigen::Map<Vector>(out.data(), static_cast<Index>(out.size()));
}

}  // namespace lomq
