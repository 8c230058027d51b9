// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"

namespace lomq {
namespace {

using Index = Eigen::Index;
using Complex = std::complex<double>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_label(const Label& label) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < label.size(); ++i) out << (i ? "," : "") << label[i];
  out << ")";
  return out.str();
}

bool is_imaginary(const ComplexMatrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  return scale > 0 && m.real().cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

// i^k for integer k.
Complex i_power(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CouplingGraph

CouplingGraph CouplingGraph::from_blocks(const BlockExtraction& blocks) {
  CouplingGraph g;
  for (const auto& c : blocks.couplings) {
    g.add(CouplingEdge{c.subsystem_a, c.subsystem_b, c.coordinate_a, c.coordinate_b, c.inverse_capacitance,
                       c.inverse_inductance});
  }
  return g;
}

void CouplingGraph::add(CouplingEdge edge) {
  if (edge.subsystem_a == edge.subsystem_b) {
    throw Error(ErrorCode::InvalidPartition, "coupling edge joins a subsystem to itself");
  }
  if (edge.inverse_capacitance == 0.0 && edge.inverse_inductance == 0.0) return;
  if (edge.subsystem_a > edge.subsystem_b) {
    std::swap(edge.subsystem_a, edge.subsystem_b);
    std::swap(edge.port_a, edge.port_b);
  }
  edges_.push_back(std::move(edge));
}

std::optional<CouplingEdge> CouplingGraph::find(std::size_t a, const std::string& port_a, std::size_t b,
                                                const std::string& port_b) const {
  for (const auto& e : edges_) {
    if (e.subsystem_a == a && e.port_a == port_a && e.subsystem_b == b && e.port_b == port_b) return e;
    if (e.subsystem_a == b && e.port_a == port_b && e.subsystem_b == a && e.port_b == port_a) return e;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Assembly

std::size_t CompositeHamiltonian::factor_index(const std::string& label) const {
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (factors[f].label == label) return f;
  }
  throw Error(ErrorCode::UnknownNode, "no Hilbert-space factor '" + label + "'");
}

CompositeHamiltonian build_full_hamiltonian(std::span<const QuantizedSubsystem> subsystems,
                                            const CouplingGraph& graph, std::size_t max_dimension) {
  CompositeHamiltonian h;
  std::vector<std::size_t> first_factor;
  std::size_t dimension = 1;
  for (std::size_t s = 0; s < subsystems.size(); ++s) {
    first_factor.push_back(h.factors.size());
    for (std::size_t k = 0; k < subsystems[s].factors.size(); ++k) {
      const auto& f = subsystems[s].factors[k];
      h.factors.push_back(FactorInfo{f.label, s, k, f.energies});
      const auto d = static_cast<std::size_t>(f.energies.size());
      h.dims.push_back(d);
      if (d == 0 || dimension > max_dimension / d) {
        throw Error(ErrorCode::DimensionOverflow,
                    "product dimension exceeds the cap of " + std::to_string(max_dimension));
      }
      dimension *= d;
    }
  }
  if (dimension > max_dimension) {
    throw Error(ErrorCode::DimensionOverflow, "product dimension " + std::to_string(dimension) +
                                                  " exceeds the cap of " + std::to_string(max_dimension));
  }

  const std::size_t nf = h.factors.size();
  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t f = nf; f-- > 1;) stride[f - 1] = stride[f] * h.dims[f];

  for (const auto& e : graph.edges()) {
    if (e.subsystem_a >= subsystems.size() || e.subsystem_b >= subsystems.size()) {
      throw Error(ErrorCode::InvalidPartition, "coupling edge references an unknown subsystem");
    }
    const auto& sa = subsystems[e.subsystem_a];
    const auto& sb = subsystems[e.subsystem_b];
    const PortOperators* pa = sa.find_port(e.port_a);
    const PortOperators* pb = sb.find_port(e.port_b);
    if (!pa || !pb) {
      throw Error(ErrorCode::Unsupported, "coupling between " + e.port_a + " and " + e.port_b +
                                              " has no matching subsystem port operator");
    }
    auto add_terms = [&](const std::vector<OperatorTerm>& ta, const std::vector<OperatorTerm>& tb, double value) {
      for (const auto& a : ta) {
        for (const auto& b : tb) {
          h.terms.push_back(InteractionTerm{first_factor[e.subsystem_a] + a.factor,
                                            first_factor[e.subsystem_b] + b.factor, 0.5 * value, a.matrix,
                                            b.matrix});
        }
      }
    };
    if (e.inverse_capacitance != 0.0) add_terms(pa->charge, pb->charge, e.inverse_capacitance);
    if (e.inverse_inductance != 0.0) {
      if ((pa->flux.empty() && !pa->charge.empty()) || (pb->flux.empty() && !pb->charge.empty())) {
        throw Error(ErrorCode::Unsupported, "inductive coupling to port " +
                                                (pa->flux.empty() ? e.port_a : e.port_b) +
                                                " which has no flux operator");
      }
      add_terms(pa->flux, pb->flux, e.inverse_inductance);
    }
  }

  const auto dim = static_cast<Index>(dimension);
  h.matrix = ComplexMatrix::Zero(dim, dim);
  std::vector<std::size_t> digits(nf);
  for (Index i = 0; i < dim; ++i) {
    std::size_t rest = static_cast<std::size_t>(i);
    double bare = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
      digits[f] = rest / stride[f];
      rest %= stride[f];
      bare += h.factors[f].energies(static_cast<Index>(digits[f]));
    }
    h.matrix(i, i) += bare;
    for (const auto& t : h.terms) {
      const auto da = static_cast<Index>(digits[t.factor_a]);
      const auto db = static_cast<Index>(digits[t.factor_b]);
      for (Index ra = 0; ra < t.op_a.rows(); ++ra) {
        const Complex va = t.op_a(ra, da);
        if (va == Complex(0.0)) continue;
        for (Index rb = 0; rb < t.op_b.rows(); ++rb) {
          const Complex vb = t.op_b(rb, db);
          if (vb == Complex(0.0)) continue;
          const Index row = i + (ra - da) * static_cast<Index>(stride[t.factor_a]) +
                            (rb - db) * static_cast<Index>(stride[t.factor_b]);
          h.matrix(row, i) += t.strength * va * vb;
        }
      }
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Diagonalization and labeling

std::optional<double> DressedSpectrum::energy(const Label& label) const {
  const auto it = labels.find(label);
  if (it == labels.end()) return std::nullopt;
  return energies(static_cast<Index>(it->second));
}

double DressedSpectrum::require(const Label& label) const {
  if (auto e = energy(label)) return *e;
  std::string detail;
  if (label.size() == dims.size() && best_overlap.size() > 0) {
    std::size_t index = 0;
    bool inside = true;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      inside = inside && label[f] >= 0 && static_cast<std::size_t>(label[f]) < dims[f];
      index = index * dims[f] + static_cast<std::size_t>(std::max(label[f], 0));
    }
    if (inside) detail = " (best overlap^2 " + std::to_string(best_overlap(static_cast<Index>(index))) + ")";
  }
  throw Error(ErrorCode::UnlabeledState, "no dressed state has overlap^2 >= 0.5 with bare state " +
                                             format_label(label) + detail);
}

Label DressedSpectrum::excitation(std::initializer_list<std::pair<std::size_t, int>> levels) const {
  Label label(dims.size(), 0);
  for (const auto& [factor, level] : levels) label.at(factor) += level;
  return label;
}

DressedSpectrum diagonalize(const CompositeHamiltonian& h) {
  DressedSpectrum out;
  out.dims = h.dims;
  for (const auto& f : h.factors) out.factor_labels.push_back(f.label);
  const Index dim = h.matrix.rows();
  const std::size_t nf = h.dims.size();
  const double scale = h.matrix.cwiseAbs().maxCoeff();
  if ((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::MalformedMatrix, "composite Hamiltonian is not Hermitian");
  }

  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t f = nf; f-- > 1;) stride[f - 1] = stride[f] * h.dims[f];

  // Per-factor phases diag(i^n) turn i(a^dag - a) into a real quadrature.
  std::vector<int> rotate(nf, 0);
  for (const auto& t : h.terms) {
    if (is_imaginary(t.op_a)) rotate[t.factor_a] = 1;
    if (is_imaginary(t.op_b)) rotate[t.factor_b] = 1;
  }
  std::vector<long> phase(static_cast<std::size_t>(dim), 0);
  for (Index i = 0; i < dim; ++i) {
    std::size_t rest = static_cast<std::size_t>(i);
    long p = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      p += rotate[f] * static_cast<long>(rest / stride[f]);
      rest %= stride[f];
    }
    phase[static_cast<std::size_t>(i)] = p;
  }
  ComplexMatrix rotated(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    for (Index r = 0; r < dim; ++r) {
      rotated(r, c) = h.matrix(r, c) * i_power(phase[static_cast<std::size_t>(c)] - phase[static_cast<std::size_t>(r)]);
    }
  }

  Eigen::MatrixXd weights;  // |<bare|dressed>|^2
  if (rotated.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    out.real_solver = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rotated.real());
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::TruncationNotConverged, "eigensolver failed");
    out.energies = solver.eigenvalues();
    weights = solver.eigenvectors().cwiseAbs2();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::TruncationNotConverged, "eigensolver failed");
    out.energies = solver.eigenvalues();
    weights = solver.eigenvectors().cwiseAbs2();
  }

  out.best_overlap = weights.rowwise().maxCoeff();
  std::vector<bool> taken(static_cast<std::size_t>(dim), false);
  for (Index e = 0; e < dim; ++e) {
    Index best = 0;
    const double w = weights.col(e).maxCoeff(&best);
    if (w < kLabelOverlap || taken[static_cast<std::size_t>(best)]) continue;
    taken[static_cast<std::size_t>(best)] = true;
    Label label(nf);
    std::size_t rest = static_cast<std::size_t>(best);
    for (std::size_t f = 0; f < nf; ++f) {
      label[f] = static_cast<int>(rest / stride[f]);
      rest %= stride[f];
    }
    out.labels.emplace(label, static_cast<std::size_t>(e));
    out.overlaps.emplace(std::move(label), w);
  }
  const Label ground(nf, 0);
  if (!out.labels.count(ground)) {
    out.diagnostics.push_back("ground state is not labeled " + format_label(ground));
  } else if (out.labels.at(ground) != 0) {
    out.diagnostics.push_back("bare ground state is not the dressed ground state");
  }
  out.unlabeled = static_cast<std::size_t>(dim) - out.labels.size();
  return out;
}

DispersiveObservables extract_dispersive(const DressedSpectrum& spectrum, std::size_t qubit_factor,
                                         std::size_t readout_factor) {
  const std::size_t nf = spectrum.dims.size();
  if (qubit_factor >= nf || readout_factor >= nf || qubit_factor == readout_factor) {
    throw Error(ErrorCode::ConfigError, "invalid qubit/readout factor selection");
  }
  const double h = constants::planck;
  DispersiveObservables out;
  out.factor_labels = spectrum.factor_labels;
  out.qubit = qubit_factor;
  out.readout = readout_factor;

  const Label ground(nf, 0);
  const double e00 = spectrum.require(ground);
  // NaN when the state is missing from the truncation or unlabeled.
  auto get = [&](std::initializer_list<std::pair<std::size_t, int>> levels) {
    for (const auto& [factor, level] : levels) {
      if (static_cast<std::size_t>(level) >= spectrum.dims[factor]) return kNaN;
    }
    return spectrum.energy(spectrum.excitation(levels)).value_or(kNaN);
  };

  out.frequencies = Eigen::VectorXd::Constant(static_cast<Index>(nf), kNaN);
  out.anharmonicities = Eigen::VectorXd::Constant(static_cast<Index>(nf), kNaN);
  out.chi = Eigen::MatrixXd::Constant(static_cast<Index>(nf), static_cast<Index>(nf), kNaN);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto fi = static_cast<Index>(f);
    const double e1 = get({{f, 1}});
    out.frequencies(fi) = (e1 - e00) / h;
    out.anharmonicities(fi) = (get({{f, 2}}) - 2.0 * e1 + e00) / h;
    for (std::size_t g = f + 1; g < nf; ++g) {
      const auto gi = static_cast<Index>(g);
      out.chi(fi, gi) = out.chi(gi, fi) = (get({{f, 1}, {g, 1}}) - e1 - get({{g, 1}}) + e00) / h;
    }
  }

  const double eq = spectrum.require(spectrum.excitation({{qubit_factor, 1}}));
  const double er = spectrum.require(spectrum.excitation({{readout_factor, 1}}));
  const double eqr = spectrum.require(spectrum.excitation({{qubit_factor, 1}, {readout_factor, 1}}));
  const double eq2 = spectrum.require(spectrum.excitation({{qubit_factor, 2}}));
  out.qubit_frequency = (eq - e00) / h;
  out.readout_frequency = (er - e00) / h;
  out.qubit_anharmonicity = (eq2 - 2.0 * eq + e00) / h;
  out.chi_qr = (eqr - eq - er + e00) / h;
  return out;
}

}  // namespace lomq
