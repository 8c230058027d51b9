// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/io/report.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "lomq/constants.hpp"
#include "lomq/io/maxwell_file.hpp"
#include "lomq/netlist.hpp"
#include "lomq/subsystems.hpp"

namespace lomq::io {
namespace {

using ojson = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson quantity(double v, const char* unit) { return ojson{{"value", number(v)}, {"unit", unit}}; }

ojson series(const std::vector<double>& values, const char* unit) {
  ojson arr = ojson::array();
  for (double v : values) arr.push_back(number(v));
  return ojson{{"values", std::move(arr)}, {"unit", unit}};
}

const char* termination_name(Termination t) { return t == Termination::Open ? "open" : "short"; }

ojson digest(const InputDigest& d) { return ojson{{"path", d.path}, {"sha256", d.sha256}}; }

ojson provenance_block(const Provenance& p) {
  ojson inputs = ojson::array();
  for (const auto& d : p.inputs) inputs.push_back(digest(d));
  return ojson{{"tool", "lomq"},
               {"version", p.version},
               {"config", p.source ? digest(*p.source) : ojson(nullptr)},
               {"inputs", std::move(inputs)},
               {"effective_config_sha256", p.effective_config_sha256},
               {"tolerances", tolerance_block()}};
}

ojson transmon_block(const TransmonReport& t) {
  return ojson{{"name", t.name},
               {"junction", t.junction},
               {"C_J_eff", quantity(t.capacitance, "F")},
               {"E_C", quantity(t.charging_energy / constants::planck, "Hz")},
               {"E_J", quantity(t.josephson_energy / constants::planck, "Hz")},
               {"E_J_over_E_C", quantity(t.josephson_energy / t.charging_energy, "1")},
               {"L_j", quantity(t.inductance, "H")},
               {"bare_frequency", quantity(t.bare_frequency, "Hz")},
               {"bare_anharmonicity", quantity(t.bare_anharmonicity, "Hz")}};
}

ojson mode_block(const LineMode& m) {
  return ojson{{"index", m.index},
               {"frequency", quantity(m.omega / kTwoPi, "Hz")},
               {"wavenumber", quantity(m.wavenumber, "rad/m")},
               {"phase", quantity(m.phase, "rad")},
               {"load_participation", quantity(m.load_participation, "1")},
               {"load_charge_zpf", quantity(m.load_charge_zpf, "C")}};
}

ojson line_spec_block(const LoadedLineSpec& s) {
  return ojson{{"length", quantity(s.length, "m")},
               {"impedance", quantity(s.impedance(), "ohm")},
               {"phase_velocity", quantity(s.phase_velocity(), "m/s")},
               {"capacitance_per_length", quantity(s.capacitance_per_length, "F/m")},
               {"inductance_per_length", quantity(s.inductance_per_length, "H/m")},
               {"load_capacitance", quantity(s.load_capacitance, "F")},
               {"termination", termination_name(s.termination)},
               {"knee_frequency", quantity(s.knee_frequency() / kTwoPi, "Hz")}};
}

ojson line_block(const LineReport& l) {
  ojson modes = ojson::array();
  for (const auto& m : l.modes) modes.push_back(mode_block(m));
  ojson out{{"name", l.name},
            {"load_port", l.load_port},
            {"C_L_eff", quantity(l.load_capacitance, "F")}};
  if (l.far_port) {
    out["far_port"] = *l.far_port;
    out["far_capacitance"] = quantity(l.far_capacitance, "F");
  }
  out["line"] = line_spec_block(l.spec);
  out["unloaded_fundamental"] = quantity(l.unloaded_fundamental / kTwoPi, "Hz");
  out["modes"] = std::move(modes);
  return out;
}

ojson coupling_block(const CouplingReport& c) {
  ojson rates = ojson::array();
  for (const auto& r : c.rates) {
    rates.push_back(ojson{{"factors", {r.factor_a, r.factor_b}}, {"g", quantity(r.rate / kTwoPi, "Hz")}});
  }
  const double ceff = c.inverse_capacitance != 0.0 ? 1.0 / c.inverse_capacitance : NAN;
  return ojson{{"subsystems", {c.subsystem_a, c.subsystem_b}},
               {"ports", {c.port_a, c.port_b}},
               {"inverse_capacitance", quantity(c.inverse_capacitance, "1/F")},
               {"effective_capacitance", quantity(ceff, "F")},
               {"inverse_inductance", quantity(c.inverse_inductance, "1/H")},
               {"rates", std::move(rates)}};
}

ojson observables_block(const DispersiveObservables& o) {
  return ojson{{"qubit", o.factor_labels.at(o.qubit)},
               {"readout", o.factor_labels.at(o.readout)},
               {"qubit_frequency", quantity(o.qubit_frequency, "Hz")},
               {"readout_frequency", quantity(o.readout_frequency, "Hz")},
               {"qubit_anharmonicity", quantity(o.qubit_anharmonicity, "Hz")},
               {"chi_qr", quantity(o.chi_qr, "Hz")}};
}

ojson model_block(const AnalysisResult& r) {
  const auto& o = r.observables;
  ojson factors = ojson::array();
  for (std::size_t k = 0; k < o.factor_labels.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    factors.push_back(ojson{{"label", o.factor_labels[k]},
                            {"frequency", quantity(o.frequencies(i), "Hz")},
                            {"anharmonicity", quantity(o.anharmonicities(i), "Hz")}});
  }
  ojson chi = ojson::array();
  for (Eigen::Index a = 0; a < o.chi.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < o.chi.cols(); ++b) {
      chi.push_back(ojson{{"factors", {o.factor_labels[static_cast<std::size_t>(a)],
                                       o.factor_labels[static_cast<std::size_t>(b)]}},
                          {"chi", quantity(o.chi(a, b), "Hz")}});
    }
  }
  ojson transmons = ojson::array();
  for (const auto& t : r.transmons) transmons.push_back(transmon_block(t));
  ojson lines = ojson::array();
  for (const auto& l : r.lines) lines.push_back(line_block(l));
  ojson couplings = ojson::array();
  for (const auto& c : r.couplings) couplings.push_back(coupling_block(c));

  return ojson{{"model", r.naive ? "naive" : "full"},
               {"observables", observables_block(o)},
               {"factors", std::move(factors)},
               {"chi", std::move(chi)},
               {"transmons", std::move(transmons)},
               {"lines", std::move(lines)},
               {"couplings", std::move(couplings)},
               {"reduction", ojson{{"coordinates", r.reduced.labels}, {"eliminated", r.reduced.eliminated}}},
               {"hilbert_dimension", quantity(static_cast<double>(r.dimension), "1")},
               {"solver", ojson{{"real_symmetric", r.spectrum.real_solver},
                                {"unlabeled_states", quantity(static_cast<double>(r.spectrum.unlabeled), "1")},
                                {"diagnostics", r.spectrum.diagnostics}}}};
}

ojson comparison_row(const char* name, double full, double naive, const char* unit) {
  return ojson{{"quantity", name},
               {"full", quantity(full, unit)},
               {"naive", quantity(naive, unit)},
               {"naive_minus_full", quantity(naive - full, unit)},
               {"relative_difference", quantity(100.0 * (naive - full) / full, "%")}};
}

ojson comparison_block(const AnalysisResult& full, const AnalysisResult& naive) {
  const auto& a = full.observables;
  const auto& b = naive.observables;
  ojson rows = ojson::array();
  rows.push_back(comparison_row("qubit_frequency", a.qubit_frequency, b.qubit_frequency, "Hz"));
  rows.push_back(comparison_row("qubit_anharmonicity", a.qubit_anharmonicity, b.qubit_anharmonicity, "Hz"));
  rows.push_back(comparison_row("readout_frequency", a.readout_frequency, b.readout_frequency, "Hz"));
  rows.push_back(comparison_row("chi_qr", a.chi_qr, b.chi_qr, "Hz"));
  for (std::size_t k = 0; k < full.transmons.size() && k < naive.transmons.size(); ++k) {
    rows.push_back(comparison_row(("C_J_eff/" + full.transmons[k].name).c_str(), full.transmons[k].capacitance,
                                  naive.transmons[k].capacitance, "F"));
  }
  for (std::size_t k = 0; k < full.lines.size() && k < naive.lines.size(); ++k) {
    rows.push_back(comparison_row(("fundamental/" + full.lines[k].name).c_str(),
                                  full.lines[k].modes.front().omega / kTwoPi,
                                  naive.lines[k].modes.front().omega / kTwoPi, "Hz"));
  }
  return rows;
}

std::string g(double v, int digits = 6) {
  if (!std::isfinite(v)) return "n/a";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, v);
  return buffer;
}

std::string fixed(double v, int decimals) {
  if (!std::isfinite(v)) return "n/a";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, v);
  return buffer;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void write_model(std::ostringstream& out, const AnalysisResult& r) {
  const auto& o = r.observables;
  out << "  qubit " << o.factor_labels[o.qubit] << ": f = " << fixed(o.qubit_frequency / 1e9, 6)
      << " GHz, alpha = " << fixed(o.qubit_anharmonicity / 1e6, 3) << " MHz\n";
  out << "  readout " << o.factor_labels[o.readout] << ": f = " << fixed(o.readout_frequency / 1e9, 6)
      << " GHz\n";
  out << "  chi_qr = " << fixed(o.chi_qr / 1e6, 4) << " MHz   (Hilbert dimension " << r.dimension << ")\n\n";

  out << "  " << pad("factor", 16) << pad("f [GHz]", 14) << "alpha [MHz]\n";
  for (std::size_t k = 0; k < o.factor_labels.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    out << "  " << pad(o.factor_labels[k], 16) << pad(fixed(o.frequencies(i) / 1e9, 6), 14)
        << fixed(o.anharmonicities(i) / 1e6, 3) << "\n";
  }
  out << "\n  chi [MHz]\n";
  for (Eigen::Index a = 0; a < o.chi.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < o.chi.cols(); ++b) {
      out << "  " << pad(o.factor_labels[static_cast<std::size_t>(a)] + " / " +
                             o.factor_labels[static_cast<std::size_t>(b)],
                         32)
          << fixed(o.chi(a, b) / 1e6, 4) << "\n";
    }
  }
  out << "\n";
  for (const auto& t : r.transmons) {
    out << "  transmon " << t.name << ": C_J_eff = " << fixed(t.capacitance * 1e15, 3)
        << " fF, E_C/h = " << fixed(t.charging_energy / constants::planck / 1e6, 2)
        << " MHz, E_J/h = " << fixed(t.josephson_energy / constants::planck / 1e9, 4)
        << " GHz, L_j = " << fixed(t.inductance * 1e9, 4) << " nH\n";
  }
  for (const auto& l : r.lines) {
    out << "  line " << l.name << ": C_L_eff = " << fixed(l.load_capacitance * 1e15, 3)
        << " fF at " << l.load_port << ", length = " << fixed(l.spec.length * 1e3, 4)
        << " mm, unloaded f = " << fixed(l.unloaded_fundamental / kTwoPi / 1e9, 4) << " GHz\n";
    for (const auto& m : l.modes) {
      out << "    m = " << m.index << ": f = " << fixed(m.omega / kTwoPi / 1e9, 6)
          << " GHz, p_L = " << fixed(m.load_participation, 4) << "\n";
    }
  }
  if (!r.couplings.empty()) out << "\n  " << pad("coupling", 32) << pad("C_eff [fF]", 14) << "g/2pi [MHz]\n";
  for (const auto& c : r.couplings) {
    const double ceff = c.inverse_capacitance != 0.0 ? 1e15 / c.inverse_capacitance : NAN;
    for (const auto& rate : c.rates) {
      out << "  " << pad(rate.factor_a + " / " + rate.factor_b, 32) << pad(g(ceff, 5), 14)
          << fixed(rate.rate / kTwoPi / 1e6, 3) << "\n";
    }
  }
}

void write_warnings(std::ostringstream& out, const std::vector<std::string>& warnings) {
  if (warnings.empty()) return;
  out << "\nwarnings:\n";
  for (const auto& w : warnings) out << "  - " << w << "\n";
}

void write_provenance(std::ostringstream& out, const Provenance& p) {
  out << "\nlomq " << p.version << ", effective config sha256 " << p.effective_config_sha256 << "\n";
}

}  // namespace

ojson tolerance_block() {
  return ojson{{"kernel", quantity(kKernelTolerance, "1")},
               {"singular", quantity(kSingularTolerance, "1")},
               {"symmetry", quantity(kSymmetryTolerance, "1")},
               {"repairable_asymmetry", quantity(kRepairableAsymmetry, "1")},
               {"transmon_convergence", quantity(kTransmonConvergence, "1")},
               {"label_overlap", quantity(kLabelOverlap, "1")}};
}

ojson to_json(const AnalysisReport& report) {
  ojson out{{"kind", "analysis"}, {"full", model_block(report.full)}};
  if (report.naive) {
    out["naive"] = model_block(*report.naive);
    out["comparison"] = comparison_block(report.full, *report.naive);
  }
  if (report.calibration) {
    const auto& c = *report.calibration;
    out["calibration"] = ojson{{"junction", c.junction},
                               {"target_frequency", quantity(c.target_frequency, "Hz")},
                               {"L_j", quantity(c.inductance, "H")},
                               {"evaluations", quantity(c.evaluations, "1")}};
  }
  out["warnings"] = report.warnings;
  out["provenance"] = provenance_block(report.provenance);
  return out;
}

ojson to_json(const SweepResult& sweep) {
  ojson points = ojson::array();
  for (const auto& p : sweep.points) {
    ojson point{{"value", p.value}, {"full", model_block(p.report.full)}};
    if (p.report.naive) point["naive"] = model_block(*p.report.naive);
    point["effective_config_sha256"] = p.report.provenance.effective_config_sha256;
    point["warnings"] = p.report.warnings;
    points.push_back(std::move(point));
  }
  return ojson{{"kind", "sweep"},
               {"parameter", sweep.parameter},
               {"points", std::move(points)},
               {"provenance", provenance_block(sweep.provenance)}};
}

ojson to_json(const BudgetTable& table) {
  ojson rows = ojson::array();
  for (const auto& r : table.rows) {
    rows.push_back(ojson{{"parameter", r.parameter},
                         {"variation", r.variation},
                         {"chi_qr", quantity(r.chi_qr, "Hz")},
                         {"delta_chi_qr", quantity(r.delta_percent, "%")}});
  }
  return ojson{{"kind", "budget"},
               {"nominal_chi_qr", quantity(table.nominal_chi_qr, "Hz")},
               {"rows", std::move(rows)},
               {"warnings", table.warnings},
               {"provenance", provenance_block(table.provenance)}};
}

ojson to_json(const LineModesReport& report) {
  ojson modes = ojson::array();
  for (std::size_t k = 0; k < report.modes.modes.size(); ++k) {
    ojson m = mode_block(report.modes.modes[k]);
    m["unloaded_frequency"] = quantity(report.unloaded.modes[k].omega / kTwoPi, "Hz");
    modes.push_back(std::move(m));
  }
  ojson fields = ojson::array();
  for (std::size_t k = 0; k < report.fields.size(); ++k) {
    fields.push_back(ojson{{"index", report.modes.modes[k].index},
                           {"u", series(report.fields[k], "1")},
                           {"charge_zpf", series(report.charge_densities[k], "C/m")}});
  }
  ojson targets = ojson::array();
  const double b = report.spec.termination_index();
  for (const auto& m : report.modes.modes) targets.push_back(number((m.index + 0.5 * b) * std::numbers::pi));
  return ojson{
      {"kind", "modes"},
      {"line", line_spec_block(report.spec)},
      {"dc_mode", report.modes.dc_mode ? mode_block(*report.modes.dc_mode) : ojson(nullptr)},
      {"modes", std::move(modes)},
      {"fields", ojson{{"z", series(report.positions, "m")}, {"modes", std::move(fields)}}},
      {"characteristic", ojson{{"omega", series(report.curve_omega, "rad/s")},
                               {"loaded", series(report.curve_loaded, "rad")},
                               {"unloaded", series(report.curve_unloaded, "rad")},
                               {"branch_targets", ojson{{"values", std::move(targets)}, {"unit", "rad"}}}}},
      {"provenance", ojson{{"tool", "lomq"}, {"version", LOMQ_VERSION}}}};
}

std::string to_table(const AnalysisReport& report) {
  std::ostringstream out;
  out << "full model\n";
  write_model(out, report.full);
  if (report.naive) {
    out << "\nnaive model\n";
    write_model(out, *report.naive);
    out << "\n  " << pad("quantity", 28) << pad("full", 16) << pad("naive", 16) << "difference\n";
    for (const auto& row : comparison_block(report.full, *report.naive)) {
      out << "  " << pad(row["quantity"].get<std::string>(), 28)
          << pad(g(row["full"]["value"].is_null() ? NAN : row["full"]["value"].get<double>(), 8), 16)
          << pad(g(row["naive"]["value"].is_null() ? NAN : row["naive"]["value"].get<double>(), 8), 16)
          << fixed(row["relative_difference"]["value"].is_null()
                       ? NAN
                       : row["relative_difference"]["value"].get<double>(),
                   2)
          << " %\n";
    }
  }
  if (report.calibration) {
    const auto& c = *report.calibration;
    out << "\ncalibrated " << c.junction << ": L_j = " << fixed(c.inductance * 1e9, 6) << " nH for f_q = "
        << fixed(c.target_frequency / 1e9, 4) << " GHz (" << c.evaluations << " evaluations)\n";
  }
  write_warnings(out, report.warnings);
  write_provenance(out, report.provenance);
  return out.str();
}

std::string to_table(const SweepResult& sweep) {
  std::ostringstream out;
  out << "sweep of " << sweep.parameter << "\n\n";
  out << "  " << pad("value", 16) << pad("f_q [GHz]", 14) << pad("alpha [MHz]", 14) << pad("f_r [GHz]", 14)
      << "chi_qr [MHz]\n";
  for (const auto& p : sweep.points) {
    const auto& o = p.report.full.observables;
    out << "  " << pad(g(p.value, 8), 16) << pad(fixed(o.qubit_frequency / 1e9, 6), 14)
        << pad(fixed(o.qubit_anharmonicity / 1e6, 3), 14) << pad(fixed(o.readout_frequency / 1e9, 6), 14)
        << fixed(o.chi_qr / 1e6, 4) << "\n";
  }
  write_provenance(out, sweep.provenance);
  return out.str();
}

std::string to_table(const BudgetTable& table) {
  std::ostringstream out;
  out << "nominal chi_qr = " << fixed(table.nominal_chi_qr / 1e6, 4) << " MHz\n\n";
  out << "  " << pad("parameter", 26) << pad("variation", 32) << pad("chi_qr [MHz]", 14) << "delta [%]\n";
  for (const auto& r : table.rows) {
    out << "  " << pad(r.parameter, 26) << pad(r.variation, 32) << pad(fixed(r.chi_qr / 1e6, 4), 14)
        << fixed(r.delta_percent, 2) << "\n";
  }
  write_warnings(out, table.warnings);
  write_provenance(out, table.provenance);
  return out.str();
}

std::string to_table(const LineModesReport& report) {
  std::ostringstream out;
  const auto& s = report.spec;
  out << "line: length " << fixed(s.length * 1e3, 4) << " mm, Z0 " << fixed(s.impedance(), 2) << " ohm, v_p "
      << g(s.phase_velocity(), 6) << " m/s, C_L " << fixed(s.load_capacitance * 1e15, 3) << " fF, "
      << termination_name(s.termination) << " end\n";
  if (std::isfinite(s.knee_frequency())) {
    out << "knee frequency " << fixed(s.knee_frequency() / kTwoPi / 1e9, 4) << " GHz\n";
  }
  if (report.modes.dc_mode) {
    out << "d.c. mode: p_L = " << fixed(report.modes.dc_mode->load_participation, 6) << " (not quantized)\n";
  }
  out << "\n  " << pad("m", 5) << pad("f [GHz]", 14) << pad("unloaded [GHz]", 16) << pad("p_L", 12)
      << "Q_zpf(0) [e]\n";
  for (std::size_t k = 0; k < report.modes.modes.size(); ++k) {
    const auto& m = report.modes.modes[k];
    out << "  " << pad(std::to_string(m.index), 5) << pad(fixed(m.omega / kTwoPi / 1e9, 6), 14)
        << pad(fixed(report.unloaded.modes[k].omega / kTwoPi / 1e9, 6), 16)
        << pad(fixed(m.load_participation, 6), 12) << fixed(m.load_charge_zpf / constants::elementary_charge, 5)
        << "\n";
  }
  out << "\nuse --format machine for field profiles and characteristic-curve samples\n";
  return out.str();
}

std::string render_machine(const ojson& document) { return document.dump(2) + "\n"; }

}  // namespace lomq::io
