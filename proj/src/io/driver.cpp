// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/io/driver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"

namespace lomq::io {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, (where.empty() ? std::string("/") : where) + ": " + what);
}

Provenance make_provenance(const DeviceConfig& nominal) {
  Provenance p;
  p.version = LOMQ_VERSION;
  p.source = nominal.source;
  p.inputs = nominal.inputs;
  p.effective_config_sha256 = sha256_hex(nominal.document.dump());
  return p;
}

DeviceConfig rebuild(const DeviceConfig& base, const json& document) {
  return build_config(document, base.base_directory, base.source);
}

json& subsystem_entry(json& doc, const std::string& name) {
  for (auto& s : doc.at("subsystems")) {
    if (s.value("name", "") == name) return s;
  }
  config_error("/subsystems", "no subsystem named '" + name + "'");
}

std::string qubit_name(const DeviceConfig& cfg) {
  if (!cfg.options.qubit.empty()) return cfg.options.qubit;
  for (const auto& d : cfg.model.subsystems) {
    if (std::holds_alternative<TransmonDeclaration>(d)) return declaration_name(d);
  }
  config_error("/subsystems", "no transmon subsystem");
}

std::string readout_name(const DeviceConfig& cfg) {
  if (!cfg.options.readout.empty()) return cfg.options.readout;
  for (const auto& d : cfg.model.subsystems) {
    if (std::holds_alternative<LineDeclaration>(d)) return declaration_name(d);
  }
  config_error("/subsystems", "no loaded_line subsystem");
}

std::vector<std::string> bus_names(const DeviceConfig& cfg) {
  const std::string readout = readout_name(cfg);
  std::vector<std::string> out;
  for (const auto& d : cfg.model.subsystems) {
    if (std::holds_alternative<LineDeclaration>(d) && declaration_name(d) != readout) {
      out.push_back(declaration_name(d));
    }
  }
  return out;
}

void write_junction(json& doc, const JunctionElement& j) {
  for (auto& entry : doc.at("junctions")) {
    if (entry.value("name", "") != j.name) continue;
    if (j.kind == JunctionKind::Cosine) {
      entry.erase("E_J");
      entry["L_j"] = j.inductance;
    } else {
      entry["E_J"] = j.josephson_energy;
    }
    return;
  }
  config_error("/junctions", "no junction named '" + j.name + "'");
}

template <typename F>
auto run_parallel(std::size_t count, F job) {
  using R = decltype(job(std::size_t{0}));
  std::vector<R> out;
  out.reserve(count);
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < count; start += width) {
    std::vector<std::future<R>> batch;
    for (std::size_t k = start; k < std::min(count, start + width); ++k) {
      batch.push_back(std::async(std::launch::async, job, k));
    }
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

double positive(const json& doc, const std::string& key) {
  if (!doc.contains(key)) config_error("", "missing required key '" + key + "'");
  double v = 0.0;
  try {
    v = doc.at(key).get<double>();
  } catch (const json::exception&) {
    config_error("/" + key, "wrong type");
  }
  if (!(v > 0) || !std::isfinite(v)) config_error("/" + key, "must be a positive number");
  return v;
}

}  // namespace

NominalConfig resolve_nominal(const DeviceConfig& config) {
  json doc = config.document;
  NominalConfig out;
  std::optional<AnalysisResult> result;
  if (config.calibration) {
    const auto& req = *config.calibration;
    auto cal = calibrate_junction(config.model, config.options, req.junction, req.target_frequency, req.lower,
                                  req.upper);
    out.calibration = CalibrationOutcome{req.junction, req.target_frequency, cal.inductance, cal.evaluations};
    write_junction(doc, config.model.with_junction_inductance(req.junction, cal.inductance).junction(req.junction));
    doc["analysis"].erase("calibrate_junction");
    result = std::move(cal.result);
  }

  bool targets = false;
  for (const auto& d : config.model.subsystems) {
    if (const auto* line = std::get_if<LineDeclaration>(&d); line && !line->length) targets = true;
  }
  if (targets) {
    if (!result) result = analyze(config.model, config.options);
    for (const auto& line : result->lines) {
      json& entry = subsystem_entry(doc, line.name);
      if (!entry.contains("target_frequency")) continue;
      entry["length"] = line.spec.length;
      entry.erase("target_frequency");
      entry.erase("target_mode");
    }
  }
  out.config = rebuild(config, doc);
  return out;
}

AnalysisReport run_analysis(const DeviceConfig& config, bool include_naive) {
  NominalConfig nominal = resolve_nominal(config);
  const DeviceConfig& cfg = nominal.config;
  AnalysisReport report;
  report.full = analyze(cfg.model, cfg.options);
  if (include_naive) report.naive = analyze_naive(cfg.model, cfg.options);
  report.calibration = nominal.calibration;
  report.warnings = config.warnings;
  for (const auto& w : report.full.warnings) report.warnings.push_back(w);
  report.provenance = make_provenance(cfg);
  return report;
}

SweepResult run_sweep(const DeviceConfig& config, const std::string& pointer, const std::vector<double>& values,
                      bool include_naive) {
  if (values.empty()) throw Error(ErrorCode::ConfigError, "sweep needs at least one value");
  NominalConfig nominal = resolve_nominal(config);
  json::json_pointer ptr;
  try {
    ptr = json::json_pointer(pointer);
  } catch (const json::exception& e) {
    config_error(pointer, std::string("invalid JSON pointer: ") + e.what());
  }
  if (!nominal.config.document.contains(ptr)) {
    config_error(pointer, "no value at this path in the nominal configuration");
  }

  SweepResult out;
  out.parameter = pointer;
  out.provenance = make_provenance(nominal.config);
  auto reports = run_parallel(values.size(), [&](std::size_t k) {
    json doc = nominal.config.document;
    doc[ptr] = values[k];
    const DeviceConfig cfg = rebuild(nominal.config, doc);
    AnalysisReport r;
    r.full = analyze(cfg.model, cfg.options);
    if (include_naive) r.naive = analyze_naive(cfg.model, cfg.options);
    r.calibration = nominal.calibration;
    r.warnings = r.full.warnings;
    r.provenance = make_provenance(cfg);
    return r;
  });
  for (std::size_t k = 0; k < values.size(); ++k) out.points.push_back(SweepPoint{values[k], std::move(reports[k])});
  return out;
}

BudgetTable run_budget(const DeviceConfig& config) {
  const NominalConfig nominal = resolve_nominal(config);
  const DeviceConfig& cfg = config;
  const json& base = config.document;
  const AnalysisResult reference = analyze(nominal.config.model, nominal.config.options);

  const std::string qubit = qubit_name(cfg);
  const std::string readout = readout_name(cfg);
  const std::vector<std::string> buses = bus_names(cfg);

  struct Variant {
    std::string parameter;
    std::string variation;
    json document;
  };
  std::vector<Variant> variants;

  {
    json doc = base;
    doc["analysis"]["scope"] = "qubit_only";
    variants.push_back({"coupling Hamiltonians", "qubit couplings only", std::move(doc)});
  }
  if (!buses.empty()) {
    json doc = base;
    json& pairs = doc["analysis"]["disabled_pairs"];
    if (!pairs.is_array()) pairs = json::array();
    for (const auto& bus : buses) pairs.push_back({qubit, bus});
    variants.push_back({"qubit-bus couplings", "off", std::move(doc)});
  }
  {
    json doc = base;
    json& entry = subsystem_entry(doc, readout);
    const int count = entry.value("mode_count", 1);
    entry["mode_count"] = count >= 2 ? 1 : 2;
    variants.push_back({"readout first harmonic", count >= 2 ? "off" : "on", std::move(doc)});
  }
  auto scale_lines = [&](double impedance_factor, double velocity_factor) {
    json doc = base;
    for (auto& s : doc["subsystems"]) {
      if (s.value("kind", "") != "loaded_line") continue;
      if (s.contains("capacitance_per_length")) {
        // Z0 = sqrt(l/c), v = 1/sqrt(lc)
        s["capacitance_per_length"] = s["capacitance_per_length"].get<double>() / (impedance_factor * velocity_factor);
        s["inductance_per_length"] = s["inductance_per_length"].get<double>() * impedance_factor / velocity_factor;
        continue;
      }
      s["impedance"] = s["impedance"].get<double>() * impedance_factor;
      const char* key = s.contains("phase_velocity_fraction") ? "phase_velocity_fraction" : "phase_velocity";
      s[key] = s[key].get<double>() * velocity_factor;
    }
    return doc;
  };
  variants.push_back({"line impedance Z0", "+3%", scale_lines(1.03, 1.0)});
  {
    json doc = base;
    const double eps = cfg.epsilon_r;
    doc["capacitance_scale"] = base.value("capacitance_scale", 1.0) * (1.0 + 1.02 * eps) / (1.0 + eps);
    variants.push_back({"substrate permittivity", "+2% (cell capacitance proxy)", std::move(doc)});
  }
  variants.push_back({"phase velocity", "+3%", scale_lines(1.0, 1.03)});
  if (!buses.empty()) {
    json doc = base;
    for (const auto& line : reference.lines) {
      if (std::find(buses.begin(), buses.end(), line.name) == buses.end()) continue;
      json& entry = subsystem_entry(doc, line.name);
      if (entry.contains("target_frequency")) {
        entry["target_frequency"] = 1.05 * entry["target_frequency"].get<double>();
      } else {
        entry.erase("length");
        entry["target_frequency"] = 1.05 * line.modes.front().omega / (2.0 * std::numbers::pi);
      }
    }
    variants.push_back({"bus frequencies", "+5%", std::move(doc)});
  }
  {
    json doc = base;
    json& caps = doc["capacitors"];
    if (!caps.is_array()) caps = json::array();
    caps.push_back({{"name", "padding"}, {"n1", "padding_node"}, {"n2", base.at("datum")}, {"C", 1e-15}});
    json& couplers = doc["couplers"];
    if (!couplers.is_array()) couplers = json::array();
    couplers.push_back("padding_node");
    variants.push_back({"cell padding", "isolated node added (no-op)", std::move(doc)});
  }

  BudgetTable table;
  table.nominal_chi_qr = reference.observables.chi_qr;
  table.provenance = make_provenance(nominal.config);
  table.warnings = config.warnings;
  auto chis = run_parallel(variants.size(), [&](std::size_t k) {
    NominalConfig varied = resolve_nominal(rebuild(cfg, variants[k].document));
    return analyze(varied.config.model, varied.config.options).observables.chi_qr;
  });
  for (std::size_t k = 0; k < variants.size(); ++k) {
    const double delta = 100.0 * (chis[k] - table.nominal_chi_qr) / table.nominal_chi_qr;
    table.rows.push_back(BudgetRow{variants[k].parameter, variants[k].variation, chis[k], delta});
  }
  return table;
}

LineModesReport run_modes(const json& doc) {
  if (!doc.is_object()) config_error("", "line description must be a JSON object");
  const double load = doc.contains("load_capacitance") ? doc.at("load_capacitance").get<double>() : 0.0;
  if (!(load >= 0)) config_error("/load_capacitance", "must be non-negative");
  const std::string term = doc.value("termination", "open");
  Termination termination = Termination::Open;
  if (term == "short") termination = Termination::Short;
  else if (term != "open") config_error("/termination", "must be 'open' or 'short'");

  double impedance = 0.0;
  double velocity = 0.0;
  if (doc.contains("capacitance_per_length") || doc.contains("inductance_per_length")) {
    const double c = positive(doc, "capacitance_per_length");
    const double l = positive(doc, "inductance_per_length");
    impedance = std::sqrt(l / c);
    velocity = 1.0 / std::sqrt(l * c);
  } else {
    impedance = positive(doc, "impedance");
    velocity = doc.contains("phase_velocity_fraction")
                   ? positive(doc, "phase_velocity_fraction") * constants::speed_of_light
                   : positive(doc, "phase_velocity");
  }

  LoadedLineSpec spec = LoadedLineSpec::from_impedance(1.0, impedance, velocity, load, termination);
  if (doc.contains("length")) {
    spec = spec.with_length(positive(doc, "length"));
  } else if (doc.contains("target_frequency")) {
    const int m = doc.value("target_mode", spec.first_mode());
    spec = spec.with_length(calibrate_length(2.0 * std::numbers::pi * positive(doc, "target_frequency"), m, spec));
  } else {
    config_error("", "give length or target_frequency");
  }
  spec.validate();

  const int count = doc.value("mode_count", 3);
  const int samples = doc.value("samples", 101);
  if (count < 1) config_error("/mode_count", "must be at least 1");
  if (samples < 2) config_error("/samples", "must be at least 2");

  LineModesReport out;
  out.spec = spec;
  out.modes = solve_modes(spec, count);
  out.unloaded = solve_modes(spec.with_load(0.0), count);
  for (int i = 0; i < samples; ++i) out.positions.push_back(spec.length * i / (samples - 1));
  for (const auto& mode : out.modes.modes) {
    const auto fluct = zpf(spec, mode);
    std::vector<double> field;
    std::vector<double> density;
    for (double z : out.positions) {
      field.push_back(mode.field(z));
      density.push_back(fluct.charge_density(z));
    }
    out.fields.push_back(std::move(field));
    out.charge_densities.push_back(std::move(density));
  }
  const double top = (count + spec.first_mode() + 0.5) * std::numbers::pi * velocity / spec.length;
  const int points = 4 * samples;
  const LoadedLineSpec bare = spec.with_load(0.0);
  for (int i = 1; i <= points; ++i) {
    const double w = top * i / points;
    out.curve_omega.push_back(w);
    out.curve_loaded.push_back(characteristic_lhs(spec, w));
    out.curve_unloaded.push_back(characteristic_lhs(bare, w));
  }
  return out;
}

}  // namespace lomq::io
