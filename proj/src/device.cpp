// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/device.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"

namespace lomq {
namespace {

using Index = Eigen::Index;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Geometry and dressed parameters shared by the full and naive models.
struct LineGeometry {
  std::size_t subsystem = 0;
  std::string load_port;
  Index load_index = 0;
  double load_capacitance = 0.0;  // 1 / [C_k^-1]_pp
  std::optional<std::string> far_port;
  Index far_index = 0;
  double far_capacitance = 0.0;
  LoadedLineSpec spec;  // length resolved, loaded with C_L^eff
};

struct Prepared {
  ReducedCircuit reduced;
  BlockExtraction blocks;
  std::vector<std::optional<LineGeometry>> lines;  // per subsystem
  std::vector<std::string> warnings;
};

Index coordinate(const ReducedCircuit& rc, const std::string& label) {
  const auto idx = rc.index_of(label);
  if (!idx) throw Error(ErrorCode::UnknownNode, "coordinate " + label + " was eliminated or never existed");
  return static_cast<Index>(*idx);
}

void check_transmon_block(const ReducedCircuit& rc, std::size_t s, const TransmonDeclaration& t,
                          const JunctionElement& j) {
  if (j.subsystem != t.name) {
    throw Error(ErrorCode::ConfigError, "junction " + j.name + " belongs to " + j.subsystem + ", not " + t.name);
  }
  const auto& block = rc.blocks[s];
  if (block.size() != 1 || rc.labels[block[0]] != t.junction) {
    std::string coords;
    for (auto i : block) coords += " " + rc.labels[i];
    throw Error(ErrorCode::Unsupported, "transmon " + t.name +
                                            " must reduce to its single junction coordinate; retained:" + coords +
                                            " (declare the other pad as a coupler node)");
  }
  const auto d = static_cast<Index>(block[0]);
  if (std::abs(rc.linear_inverse_inductance(d, d)) > 1e-9 / j.inductance) {
    throw Error(ErrorCode::Unsupported, "transmon " + t.name + " has a linear shunt inductance");
  }
}

Prepared prepare(const DeviceModel& model) {
  Prepared p;
  const CompositeNetlist net = compose_cells(model.cells, model.registry(), model.junctions);
  p.reduced = reduce_circuit(net);
  p.blocks = extract_blocks(p.reduced);
  p.warnings = p.reduced.warnings;
  const auto& rc = p.reduced;
  p.lines.resize(model.subsystems.size());

  for (std::size_t s = 0; s < model.subsystems.size(); ++s) {
    const auto* line = std::get_if<LineDeclaration>(&model.subsystems[s]);
    if (!line) {
      const auto& t = std::get<TransmonDeclaration>(model.subsystems[s]);
      check_transmon_block(rc, s, t, model.junction(t.junction));
      continue;
    }
    if (line->nodes.empty() || line->nodes.size() > 2) {
      throw Error(ErrorCode::Unsupported, "line " + line->name + " needs one or two port nodes");
    }
    if (rc.blocks[s].size() != line->nodes.size()) {
      throw Error(ErrorCode::Unsupported, "line " + line->name + " ports were not all retained");
    }
    LineGeometry g;
    g.subsystem = s;
    std::vector<std::pair<double, std::string>> ports;
    for (const auto& node : line->nodes) {
      const Index i = coordinate(rc, node);
      if (std::abs(rc.linear_inverse_inductance(i, i)) > 0.0) {
        throw Error(ErrorCode::Unsupported, "line port " + node + " carries a lumped inductance");
      }
      ports.emplace_back(1.0 / p.blocks.inverse_capacitance(i, i), node);
    }
    std::stable_sort(ports.begin(), ports.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    g.load_capacitance = ports[0].first;
    g.load_port = ports[0].second;
    g.load_index = coordinate(rc, g.load_port);
    if (ports.size() == 2) {
      g.far_capacitance = ports[1].first;
      g.far_port = ports[1].second;
      g.far_index = coordinate(rc, *g.far_port);
      p.warnings.push_back("line " + line->name + " is loaded at both ends (" + fmt(ports[0].first * 1e15) +
                           " fF at " + ports[0].second + ", " + fmt(ports[1].first * 1e15) + " fF at " +
                           ports[1].second + "); modeled as singly loaded with the larger load");
    }

    LoadedLineSpec spec = LoadedLineSpec::from_impedance(1.0, line->impedance, line->phase_velocity,
                                                         g.load_capacitance, line->termination);
    if (line->length) {
      spec = spec.with_length(*line->length);
    } else if (line->target_frequency) {
      const int m = line->target_mode.value_or(spec.first_mode());
      spec = spec.with_length(calibrate_length(kTwoPi * *line->target_frequency, m, spec));
    } else {
      throw Error(ErrorCode::ConfigError, "line " + line->name + " needs a length or a target frequency");
    }
    spec.validate();
    g.spec = spec;
    p.lines[s] = std::move(g);
  }
  return p;
}

std::vector<int> line_levels(const LineDeclaration& d) {
  std::vector<int> levels(static_cast<std::size_t>(d.mode_count), d.harmonic_levels.value_or(d.levels));
  if (!levels.empty()) levels[0] = d.levels;
  return levels;
}

struct Selection {
  std::size_t qubit = 0;
  std::size_t readout = 0;
};

Selection select(const DeviceModel& model, const AnalysisOptions& options) {
  Selection sel;
  auto find_kind = [&](const std::string& name, bool transmon) -> std::size_t {
    for (std::size_t s = 0; s < model.subsystems.size(); ++s) {
      const bool is_transmon = std::holds_alternative<TransmonDeclaration>(model.subsystems[s]);
      if (is_transmon != transmon) continue;
      if (name.empty() || declaration_name(model.subsystems[s]) == name) return s;
    }
    throw Error(ErrorCode::ConfigError, std::string(transmon ? "qubit" : "readout") + " subsystem '" + name +
                                            "' is not a declared " + (transmon ? "transmon" : "line"));
  };
  sel.qubit = find_kind(options.qubit, true);
  sel.readout = find_kind(options.readout, false);
  return sel;
}

CouplingGraph filter_graph(const CouplingGraph& graph, const DeviceModel& model, const AnalysisOptions& options,
                           const Selection& sel) {
  return graph.filtered([&](const CouplingEdge& e) {
    if (options.scope == CouplingScope::QubitOnly && e.subsystem_a != sel.qubit && e.subsystem_b != sel.qubit) {
      return false;
    }
    const auto& a = declaration_name(model.subsystems[e.subsystem_a]);
    const auto& b = declaration_name(model.subsystems[e.subsystem_b]);
    for (const auto& [x, y] : options.disabled_pairs) {
      if ((x == a && y == b) || (x == b && y == a)) return false;
    }
    return true;
  });
}

AnalysisResult finish(const AnalysisOptions& options, const Selection& sel, AnalysisResult result) {
  std::vector<std::size_t> first_factor;
  std::size_t count = 0;
  for (const auto& q : result.quantized) {
    first_factor.push_back(count);
    count += q.factors.size();
  }
  for (const auto& e : result.graph.edges()) {
    CouplingReport report;
    report.subsystem_a = result.quantized[e.subsystem_a].name;
    report.subsystem_b = result.quantized[e.subsystem_b].name;
    report.port_a = e.port_a;
    report.port_b = e.port_b;
    report.inverse_capacitance = e.inverse_capacitance;
    report.inverse_inductance = e.inverse_inductance;
    const auto* pa = result.quantized[e.subsystem_a].find_port(e.port_a);
    const auto* pb = result.quantized[e.subsystem_b].find_port(e.port_b);
    if (pa && pb && e.inverse_capacitance != 0.0) {
      for (const auto& ta : pa->charge) {
        for (const auto& tb : pb->charge) {
          report.rates.push_back(CouplingRate{result.quantized[e.subsystem_a].factors[ta.factor].label,
                                              result.quantized[e.subsystem_b].factors[tb.factor].label,
                                              coupling_energy(ta.scale, tb.scale, e.inverse_capacitance) /
                                                  constants::hbar});
        }
      }
    }
    result.couplings.push_back(std::move(report));
  }

  const CompositeHamiltonian h = build_full_hamiltonian(result.quantized, result.graph, options.max_dimension);
  result.dimension = h.dimension();
  result.spectrum = diagonalize(h);
  for (const auto& d : result.spectrum.diagnostics) result.warnings.push_back(d);
  result.observables = extract_dispersive(result.spectrum, first_factor[sel.qubit], first_factor[sel.readout]);
  return result;
}

TransmonReport transmon_report(const TransmonDeclaration& t, const JunctionElement& j, const TransmonSpec& spec,
                               const QuantizedSubsystem& q) {
  TransmonReport r;
  r.name = t.name;
  r.junction = t.junction;
  r.capacitance = spec.capacitance;
  r.charging_energy = spec.charging_energy();
  r.josephson_energy = spec.josephson_energy;
  r.inductance = j.inductance;
  const auto& e = q.factors[0].energies;
  if (e.size() > 1) r.bare_frequency = (e(1) - e(0)) / constants::planck;
  if (e.size() > 2) r.bare_anharmonicity = (e(2) - 2.0 * e(1) + e(0)) / constants::planck;
  return r;
}

AnalysisResult quantize_all(const DeviceModel& model, const Prepared& p, bool naive) {
  AnalysisResult result;
  result.naive = naive;
  result.reduced = p.reduced;
  result.warnings = p.warnings;
  const auto& rc = p.reduced;

  for (std::size_t s = 0; s < model.subsystems.size(); ++s) {
    std::visit(Overloaded{
                   [&](const TransmonDeclaration& t) {
                     const JunctionElement& j = model.junction(t.junction);
                     const Index d = coordinate(rc, t.junction);
                     TransmonSpec spec;
                     spec.capacitance = naive ? rc.capacitance(d, d) : 1.0 / p.blocks.inverse_capacitance(d, d);
                     spec.josephson_energy = j.bias_josephson_energy();
                     spec.charge_offset = t.charge_offset;
                     spec.charge_cutoff = t.charge_cutoff;
                     spec.levels = t.levels;
                     QuantizedSubsystem q = diagonalize_transmon(spec, t.name, t.junction);
                     q.index = s;
                     result.transmons.push_back(transmon_report(t, j, spec, q));
                     result.quantized.push_back(std::move(q));
                   },
                   [&](const LineDeclaration& l) {
                     const LineGeometry& g = *p.lines[s];
                     LineReport report;
                     report.name = l.name;
                     report.load_port = g.load_port;
                     report.far_port = g.far_port;
                     LoadedLineSpec spec = g.spec;
                     if (naive) {
                       // Unloaded line placed at the dressed fundamental.
                       const int m = g.spec.first_mode();
                       const LoadedLineSpec bare = g.spec.with_load(0.0);
                       spec = bare.with_length(calibrate_length(solve_mode_frequency(g.spec, m), m, bare));
                     }
                     report.load_capacitance = spec.load_capacitance;
                     const ModeSet modes = solve_modes(spec, l.mode_count);
                     std::vector<LinePort> ports;
                     if (naive) {
                       ports.push_back(LinePort{g.load_port, LineEnd::Load, rc.capacitance(g.load_index, g.load_index)});
                     } else {
                       ports.push_back(LinePort{g.load_port, LineEnd::Load, 0.0});
                     }
                     if (g.far_port) {
                       const double c_far = naive ? rc.capacitance(g.far_index, g.far_index) : g.far_capacitance;
                       ports.push_back(LinePort{*g.far_port, LineEnd::Far, c_far});
                       report.far_capacitance = c_far;
                     }
                     const std::vector<int> levels = line_levels(l);
                     QuantizedSubsystem q = quantize_line(spec, modes.modes, levels, ports, l.name);
                     q.index = s;
                     report.spec = spec;
                     report.modes = modes.modes;
                     report.unloaded_fundamental = solve_mode_frequency(spec.with_load(0.0), spec.first_mode());
                     result.lines.push_back(std::move(report));
                     result.quantized.push_back(std::move(q));
                   },
               },
               model.subsystems[s]);
  }
  return result;
}

}  // namespace

const std::string& declaration_name(const SubsystemDeclaration& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

const std::vector<std::string>& declaration_nodes(const SubsystemDeclaration& d) {
  return std::visit([](const auto& x) -> const std::vector<std::string>& { return x.nodes; }, d);
}

NodeRegistry DeviceModel::registry() const {
  std::vector<SubsystemNodes> subs;
  for (const auto& d : subsystems) subs.push_back(SubsystemNodes{declaration_name(d), declaration_nodes(d)});
  std::vector<CellNodes> cell_nodes;
  for (const auto& c : cells) cell_nodes.push_back(CellNodes{c.name, c.nodes});
  return NodeRegistry(datum, std::move(subs), couplers, std::move(cell_nodes));
}

std::optional<std::size_t> DeviceModel::subsystem_index(const std::string& name) const {
  for (std::size_t s = 0; s < subsystems.size(); ++s) {
    if (declaration_name(subsystems[s]) == name) return s;
  }
  return std::nullopt;
}

const JunctionElement& DeviceModel::junction(const std::string& name) const {
  for (const auto& j : junctions) {
    if (j.name == name) return j;
  }
  throw Error(ErrorCode::UnknownNode, "unknown junction '" + name + "'");
}

DeviceModel DeviceModel::with_junction_inductance(const std::string& name, double inductance) const {
  if (!(inductance > 0) || !std::isfinite(inductance)) {
    throw Error(ErrorCode::ConfigError, "junction inductance must be positive");
  }
  DeviceModel out = *this;
  for (auto& j : out.junctions) {
    if (j.name != name) continue;
    if (j.kind == JunctionKind::Cosine) {
      j.josephson_energy = josephson_energy_from_inductance(inductance);
    } else {
      j.josephson_energy *= j.inductance / inductance;
    }
    j.inductance = inductance;
    j.validate();
    return out;
  }
  throw Error(ErrorCode::UnknownNode, "unknown junction '" + name + "'");
}

AnalysisResult analyze(const DeviceModel& model, const AnalysisOptions& options) {
  const Selection sel = select(model, options);
  const Prepared p = prepare(model);
  AnalysisResult result = quantize_all(model, p, false);
  result.graph = filter_graph(CouplingGraph::from_blocks(p.blocks), model, options, sel);
  return finish(options, sel, std::move(result));
}

AnalysisResult analyze_naive(const DeviceModel& model, const AnalysisOptions& options) {
  const Selection sel = select(model, options);
  const Prepared p = prepare(model);
  AnalysisResult result = quantize_all(model, p, true);

  const auto& rc = p.reduced;
  CouplingGraph naive_graph;
  for (const auto& c : p.blocks.couplings) {
    const Index a = coordinate(rc, c.coordinate_a);
    const Index b = coordinate(rc, c.coordinate_b);
    const double inverse_c = -2.0 * rc.capacitance(a, b) / (rc.capacitance(a, a) * rc.capacitance(b, b));
    naive_graph.add(CouplingEdge{c.subsystem_a, c.subsystem_b, c.coordinate_a, c.coordinate_b, inverse_c,
                                 c.inverse_inductance});
  }
  result.graph = filter_graph(naive_graph, model, options, sel);
  return finish(options, sel, std::move(result));
}

JunctionCalibration calibrate_junction(const DeviceModel& model, const AnalysisOptions& options,
                                       const std::string& junction, double target_frequency, double lower,
                                       double upper) {
  if (!(lower > 0) || !(upper > lower)) {
    throw Error(ErrorCode::ConfigError, "junction inductance bounds must satisfy 0 < lower < upper");
  }
  if (!(target_frequency > 0)) throw Error(ErrorCode::TargetOutOfRange, "target frequency must be positive");
  JunctionCalibration out;
  auto frequency = [&](double inductance) {
    ++out.evaluations;
    return analyze(model.with_junction_inductance(junction, inductance), options).observables.qubit_frequency;
  };
  const double f_lower = frequency(lower);
  const double f_upper = frequency(upper);
  if (!(f_lower > f_upper)) {
    throw Error(ErrorCode::TargetOutOfRange, "qubit frequency does not decrease across the inductance bounds");
  }
  if (target_frequency > f_lower || target_frequency < f_upper) {
    throw Error(ErrorCode::TargetOutOfRange, "target " + fmt(target_frequency) + " Hz lies outside [" +
                                                 fmt(f_upper) + ", " + fmt(f_lower) + "] Hz");
  }
  auto residual = [&](double inductance) { return frequency(inductance) - target_frequency; };
  std::uintmax_t max_iter = 60;
  const auto [a, b] = boost::math::tools::toms748_solve(residual, lower, upper, f_lower - target_frequency,
                                                        f_upper - target_frequency,
                                                        boost::math::tools::eps_tolerance<double>(30), max_iter);
  out.inductance = 0.5 * (a + b);
  out.result = analyze(model.with_junction_inductance(junction, out.inductance), options);
  const double f = out.result.observables.qubit_frequency;
  if (std::abs(f - target_frequency) > 1e-4 * target_frequency) {
    throw Error(ErrorCode::TargetOutOfRange, "calibration stalled at " + fmt(f) + " Hz");
  }
  return out;
}

}  // namespace lomq
