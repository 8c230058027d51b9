// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/io/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"
#include "lomq/io/maxwell_file.hpp"

namespace lomq::io {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) config_error(where, "missing required key '" + key + "'");
  return obj.at(key);
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  const json& v = member(obj, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    config_error(where + "/" + key, "wrong type");
  }
}

template <typename T>
std::optional<T> get_optional(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get<T>(obj, key, where);
}

double positive(const json& obj, const std::string& key, const std::string& where) {
  const double v = get<double>(obj, key, where);
  if (!(v > 0) || !std::isfinite(v)) config_error(where + "/" + key, "must be a positive number");
  return v;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

JunctionElement parse_junction(const json& j, const std::string& where) {
  const auto name = get<std::string>(j, "name", where);
  const auto n1 = get<std::string>(j, "n1", where);
  const auto n2 = get<std::string>(j, "n2", where);
  const auto subsystem = get<std::string>(j, "subsystem", where);
  const double cj = get_optional<double>(j, "C_j", where).value_or(0.0);
  const auto kind_name = get_optional<std::string>(j, "kind", where).value_or("cosine");
  const double flux = get_optional<double>(j, "flux_bias", where).value_or(0.0);
  JunctionKind kind;
  if (kind_name == "cosine") kind = JunctionKind::Cosine;
  else if (kind_name == "squid") kind = JunctionKind::SymmetricSquid;
  else config_error(where + "/kind", "must be 'cosine' or 'squid'");

  const bool has_l = j.contains("L_j");
  const bool has_e = j.contains("E_J");
  if (has_l == has_e) config_error(where, "give exactly one of L_j (H) or E_J (J)");
  try {
    if (has_l) {
      if (kind != JunctionKind::Cosine) config_error(where, "a SQUID junction takes E_J and flux_bias");
      return JunctionElement::from_inductance(name, n1, n2, positive(j, "L_j", where), cj, subsystem);
    }
    return JunctionElement::from_energy(name, n1, n2, kind, positive(j, "E_J", where), flux, cj, subsystem);
  } catch (const Error& e) {
    config_error(where, e.what());
  }
}

struct TwoTerminal {
  std::string name, n1, n2;
  double value;
};

TwoTerminal parse_two_terminal(const json& j, const std::string& key, const std::string& where) {
  return TwoTerminal{get<std::string>(j, "name", where), get<std::string>(j, "n1", where),
                     get<std::string>(j, "n2", where), positive(j, key, where)};
}

SubsystemDeclaration parse_subsystem(const json& s, const std::string& where) {
  const auto kind = get<std::string>(s, "kind", where);
  const auto name = get<std::string>(s, "name", where);
  const auto nodes = get<std::vector<std::string>>(s, "nodes", where);
  if (kind == "transmon") {
    TransmonDeclaration t;
    t.name = name;
    t.nodes = nodes;
    t.junction = get<std::string>(s, "junction", where);
    const double ng = get_optional<double>(s, "n_g", where).value_or(0.0);
    t.charge_offset = get_optional<double>(s, "charge_offset", where).value_or(2.0 * constants::elementary_charge * ng);
    t.charge_cutoff = get_optional<int>(s, "charge_cutoff", where).value_or(30);
    t.levels = get_optional<int>(s, "levels", where).value_or(5);
    return t;
  }
  if (kind == "loaded_line") {
    LineDeclaration l;
    l.name = name;
    l.nodes = nodes;
    if (s.contains("capacitance_per_length") || s.contains("inductance_per_length")) {
      const double c = positive(s, "capacitance_per_length", where);
      const double ind = positive(s, "inductance_per_length", where);
      l.impedance = std::sqrt(ind / c);
      l.phase_velocity = 1.0 / std::sqrt(ind * c);
    } else {
      l.impedance = positive(s, "impedance", where);
      if (s.contains("phase_velocity_fraction")) {
        l.phase_velocity = positive(s, "phase_velocity_fraction", where) * constants::speed_of_light;
      } else {
        l.phase_velocity = positive(s, "phase_velocity", where);
      }
    }
    const auto term = get_optional<std::string>(s, "termination", where).value_or("open");
    if (term == "open") l.termination = Termination::Open;
    else if (term == "short") l.termination = Termination::Short;
    else config_error(where + "/termination", "must be 'open' or 'short'");
    if (s.contains("length")) l.length = positive(s, "length", where);
    if (s.contains("target_frequency")) l.target_frequency = positive(s, "target_frequency", where);
    if (!l.length && !l.target_frequency) config_error(where, "give length or target_frequency");
    l.target_mode = get_optional<int>(s, "target_mode", where);
    l.mode_count = get_optional<int>(s, "mode_count", where).value_or(1);
    l.levels = get_optional<int>(s, "levels", where).value_or(5);
    l.harmonic_levels = get_optional<int>(s, "harmonic_levels", where);
    if (l.mode_count < 1) config_error(where + "/mode_count", "must be at least 1");
    if (l.levels < 2 || (l.harmonic_levels && *l.harmonic_levels < 1)) {
      config_error(where, "line truncations must be at least 2 (fundamental) and 1 (harmonics)");
    }
    return l;
  }
  config_error(where + "/kind", "must be 'transmon' or 'loaded_line'");
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::ConfigError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_bytes(path)); }

DeviceConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_bytes(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return build_config(doc, path.parent_path(), InputDigest{path.filename().string(), sha256_hex(text)});
}

DeviceConfig build_config(const json& doc, const std::filesystem::path& base_directory,
                          std::optional<InputDigest> source) {
  DeviceConfig cfg;
  cfg.document = doc;
  cfg.base_directory = base_directory;
  cfg.source = std::move(source);
  if (!doc.is_object()) config_error("", "configuration must be a JSON object");

  DeviceModel& model = cfg.model;
  model.datum = get<std::string>(doc, "datum", "");
  const bool merge = get_optional<bool>(doc, "merge_ground_nets", "").value_or(true);
  const auto ground_nets = get_optional<std::vector<std::string>>(doc, "ground_nets", "").value_or(std::vector<std::string>{});
  model.couplers = get_optional<std::vector<std::string>>(doc, "couplers", "").value_or(std::vector<std::string>{});
  const double scale = get_optional<double>(doc, "capacitance_scale", "").value_or(1.0);
  if (!(scale > 0)) config_error("/capacitance_scale", "must be positive");

  const json& cells = member(doc, "cells", "");
  if (!cells.is_array() || cells.empty()) config_error("/cells", "must be a non-empty array");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::string where = "/cells/" + std::to_string(k);
    const auto name = get<std::string>(cells[k], "name", where);
    const auto file = get<std::string>(cells[k], "maxwell", where);
    const std::filesystem::path full = base_directory / file;
    const std::string bytes = read_bytes(full);
    cfg.inputs.push_back(InputDigest{file, sha256_hex(bytes)});
    MaxwellFile parsed = parse_maxwell(bytes, file);
    for (auto& w : parsed.warnings) cfg.warnings.push_back(std::move(w));
    MaxwellMatrix m = parsed.matrix();
    if (merge) {
      std::vector<std::string> present;
      if (m.index_of(model.datum)) present.push_back(model.datum);
      for (const auto& g : ground_nets) {
        if (g != model.datum && m.index_of(g)) present.push_back(g);
      }
      if (present.size() > 1) m = merge_nets(m, present, model.datum);
    }
    m.capacitance *= scale;
    CellMatrices cell = cell_from_maxwell(name, m, model.datum);
    if (auto listed = get_optional<std::vector<std::string>>(cells[k], "nodes", where)) {
      const std::set<std::string> want(listed->begin(), listed->end());
      std::set<std::string> have(cell.nodes.begin(), cell.nodes.end());
      have.insert(model.datum);
      std::set<std::string> want_with_datum = want;
      want_with_datum.insert(model.datum);
      if (want_with_datum != have) config_error(where + "/nodes", "does not match the nodes of " + file);
    }
    model.cells.push_back(std::move(cell));
  }

  if (doc.contains("junctions")) {
    const json& js = doc.at("junctions");
    for (std::size_t k = 0; k < js.size(); ++k) {
      model.junctions.push_back(parse_junction(js[k], "/junctions/" + std::to_string(k)));
    }
  }

  std::vector<TwoTerminal> inductors;
  std::vector<TwoTerminal> capacitors;
  if (doc.contains("inductors")) {
    for (std::size_t k = 0; k < doc["inductors"].size(); ++k) {
      inductors.push_back(parse_two_terminal(doc["inductors"][k], "L", "/inductors/" + std::to_string(k)));
    }
  }
  if (doc.contains("capacitors")) {
    for (std::size_t k = 0; k < doc["capacitors"].size(); ++k) {
      capacitors.push_back(parse_two_terminal(doc["capacitors"][k], "C", "/capacitors/" + std::to_string(k)));
    }
  }
  if (!inductors.empty() || !capacitors.empty()) {
    std::set<std::string> names;
    for (const auto* list : {&inductors, &capacitors}) {
      for (const auto& e : *list) {
        if (e.n1 == e.n2) config_error("/" + e.name, "element shorts a node to itself");
        for (const auto* node : {&e.n1, &e.n2}) {
          if (*node != model.datum) names.insert(*node);
        }
      }
    }
    CellMatrices cell;
    cell.name = "elements";
    cell.nodes.assign(names.begin(), names.end());
    const auto n = static_cast<Eigen::Index>(cell.nodes.size());
    cell.capacitance = Matrix::Zero(n, n);
    cell.inverse_inductance = Matrix::Zero(n, n);
    auto index = [&](const std::string& node) -> std::optional<Eigen::Index> {
      if (node == model.datum) return std::nullopt;
      return static_cast<Eigen::Index>(std::find(cell.nodes.begin(), cell.nodes.end(), node) - cell.nodes.begin());
    };
    for (const auto& e : inductors) stamp_two_terminal(cell.inverse_inductance, index(e.n1), index(e.n2), 1.0 / e.value);
    for (const auto& e : capacitors) stamp_two_terminal(cell.capacitance, index(e.n1), index(e.n2), e.value);
    model.cells.push_back(std::move(cell));
  }

  const json& subs = member(doc, "subsystems", "");
  if (!subs.is_array() || subs.empty()) config_error("/subsystems", "must be a non-empty array");
  std::set<std::string> sub_names;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    model.subsystems.push_back(parse_subsystem(subs[k], "/subsystems/" + std::to_string(k)));
    if (!sub_names.insert(declaration_name(model.subsystems.back())).second) {
      config_error("/subsystems/" + std::to_string(k), "duplicate subsystem name");
    }
  }

  if (doc.contains("analysis")) {
    const json& a = doc.at("analysis");
    const std::string where = "/analysis";
    cfg.options.qubit = get_optional<std::string>(a, "qubit", where).value_or("");
    cfg.options.readout = get_optional<std::string>(a, "readout", where).value_or("");
    for (const auto& [key, name] : {std::pair{"qubit", cfg.options.qubit}, std::pair{"readout", cfg.options.readout}}) {
      if (!name.empty() && !sub_names.contains(name)) config_error(where + "/" + key, "unknown subsystem '" + name + "'");
    }
    const auto scope = get_optional<std::string>(a, "scope", where).value_or("all");
    if (scope == "all") cfg.options.scope = CouplingScope::All;
    else if (scope == "qubit_only") cfg.options.scope = CouplingScope::QubitOnly;
    else config_error(where + "/scope", "must be 'all' or 'qubit_only'");
    if (auto pairs = get_optional<std::vector<std::vector<std::string>>>(a, "disabled_pairs", where)) {
      for (const auto& p : *pairs) {
        if (p.size() != 2) config_error(where + "/disabled_pairs", "each entry is a pair of subsystem names");
        cfg.options.disabled_pairs.emplace_back(p[0], p[1]);
      }
    }
    cfg.options.max_dimension =
        get_optional<std::size_t>(a, "max_dimension", where).value_or(kDefaultMaxDimension);
    cfg.epsilon_r = get_optional<double>(a, "epsilon_r", where).value_or(11.45);
    if (a.contains("calibrate_junction")) {
      const json& c = a.at("calibrate_junction");
      const std::string cw = where + "/calibrate_junction";
      CalibrationRequest req;
      req.junction = get<std::string>(c, "junction", cw);
      req.target_frequency = positive(c, "target_frequency", cw);
      const auto bounds = get<std::vector<double>>(c, "bounds", cw);
      if (bounds.size() != 2 || !(bounds[0] > 0) || !(bounds[1] > bounds[0])) {
        config_error(cw + "/bounds", "must be [lower, upper] with 0 < lower < upper");
      }
      req.lower = bounds[0];
      req.upper = bounds[1];
      cfg.calibration = req;
    }
  }
  return cfg;
}

}  // namespace lomq::io
