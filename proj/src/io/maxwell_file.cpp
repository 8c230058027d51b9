// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include "lomq/io/maxwell_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lomq/error.hpp"
#include "lomq/linalg.hpp"

namespace lomq::io {
namespace {

using Index = Eigen::Index;

struct Cell {
  std::string_view text;
  std::size_t column = 1;  // 1-based
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<Cell> split(std::string_view line) {
  std::vector<Cell> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto piece = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const auto lead = piece.find_first_not_of(" \t");
    cells.push_back(Cell{trim(piece), start + 1 + (lead == std::string_view::npos ? 0 : lead)});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void parse_error(std::string_view source, std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

std::string format_number(double v) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  if (ec != std::errc()) throw Error(ErrorCode::ParseError, "cannot format value");
  return std::string(buffer, end);
}

}  // namespace

std::string_view unit_name(CapacitanceUnit unit) {
  switch (unit) {
    case CapacitanceUnit::Femtofarad: return "fF";
    case CapacitanceUnit::Picofarad: return "pF";
    case CapacitanceUnit::Farad: return "F";
  }
  return "F";
}

double unit_scale(CapacitanceUnit unit) {
  switch (unit) {
    case CapacitanceUnit::Femtofarad: return 1e-15;
    case CapacitanceUnit::Picofarad: return 1e-12;
    case CapacitanceUnit::Farad: return 1.0;
  }
  return 1.0;
}

MaxwellMatrix MaxwellFile::matrix() const { return MaxwellMatrix{nodes, raw * unit_scale(unit)}; }

MaxwellFile parse_maxwell(std::string_view text, std::string_view source) {
  MaxwellFile out;
  bool have_units = false;
  bool have_nodes = false;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t last_line = 0;

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    last_line = line_no;

    if (line.front() == '#') {
      if (have_nodes) parse_error(source, line_no, 1, "header comment after the data section");
      const auto body = line.substr(1);
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) parse_error(source, line_no, 2, "expected '# key: value'");
      const std::string key(trim(body.substr(0, colon)));
      const std::string value(trim(body.substr(colon + 1)));
      if (key.empty()) parse_error(source, line_no, 2, "empty header key");
      if (key == "units") {
        if (have_units) parse_error(source, line_no, 2, "duplicate units header");
        if (value == "fF") out.unit = CapacitanceUnit::Femtofarad;
        else if (value == "pF") out.unit = CapacitanceUnit::Picofarad;
        else if (value == "F") out.unit = CapacitanceUnit::Farad;
        else parse_error(source, line_no, colon + 3, "units must be fF, pF or F, got '" + value + "'");
        have_units = true;
      }
      out.headers.emplace_back(key, value);
      continue;
    }

    const auto cells = split(line);
    if (!have_nodes) {
      if (!have_units) parse_error(source, line_no, 1, "missing mandatory '# units:' header");
      if (cells[0].text != "node") parse_error(source, line_no, cells[0].column, "first data line must start with 'node'");
      for (std::size_t k = 1; k < cells.size(); ++k) {
        if (cells[k].text.empty()) parse_error(source, line_no, cells[k].column, "empty node name");
        for (const auto& seen : out.nodes) {
          if (seen == cells[k].text) parse_error(source, line_no, cells[k].column, "duplicate node name");
        }
        out.nodes.emplace_back(cells[k].text);
      }
      if (out.nodes.empty()) parse_error(source, line_no, 1, "no node names");
      have_nodes = true;
      continue;
    }

    const std::size_t r = rows.size();
    if (r >= out.nodes.size()) parse_error(source, line_no, 1, "more rows than nodes");
    if (cells[0].text != out.nodes[r]) {
      parse_error(source, line_no, cells[0].column,
                  "row name '" + std::string(cells[0].text) + "' does not match header node '" + out.nodes[r] + "'");
    }
    if (cells.size() != out.nodes.size() + 1) {
      parse_error(source, line_no, cells.back().column,
                  "expected " + std::to_string(out.nodes.size()) + " values, found " + std::to_string(cells.size() - 1));
    }
    std::vector<double> row;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const auto t = cells[k].text;
      double v = 0.0;
      const char* first = t.data();
      if (!t.empty() && t.front() == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        parse_error(source, line_no, cells[k].column, "invalid number '" + std::string(t) + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }

  if (!have_units) parse_error(source, line_no + 1, 1, "missing mandatory '# units:' header");
  if (!have_nodes) parse_error(source, line_no + 1, 1, "missing 'node,...' line");
  if (rows.size() != out.nodes.size()) {
    parse_error(source, last_line + 1, 1,
                "expected " + std::to_string(out.nodes.size()) + " rows, found " + std::to_string(rows.size()));
  }

  const auto n = static_cast<Index>(out.nodes.size());
  out.raw.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out.raw(i, j) = rows[i][j];
  }

  const double asym = linalg::asymmetry(out.raw);
  if (asym >= kRepairableAsymmetry) {
    throw Error(ErrorCode::AsymmetryError, std::string(source) + ": relative asymmetry " + format_number(asym) +
                                               " exceeds " + format_number(kRepairableAsymmetry));
  }
  if (asym > kExactSymmetry) {
    out.raw = linalg::symmetrized(out.raw);
    out.warnings.push_back(std::string(source) + ": symmetrized a relative asymmetry of " + format_number(asym));
  }
  const double scale = linalg::max_abs(out.raw);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && out.raw(i, j) > kExactSymmetry * scale) {
        throw Error(ErrorCode::SignError, std::string(source) + ": positive off-diagonal entry " +
                                              format_number(out.raw(i, j)) + " between " + out.nodes[i] + " and " +
                                              out.nodes[j]);
      }
    }
  }
  if (auto violation = maxwell_violation(out.matrix())) {
    throw Error(ErrorCode::MalformedMatrix, std::string(source) + ": " + *violation);
  }
  return out;
}

MaxwellFile read_maxwell_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_maxwell(buffer.str(), path.string());
}

std::string serialize_maxwell(const MaxwellFile& file) {
  std::string out;
  bool wrote_units = false;
  for (const auto& [key, value] : file.headers) {
    if (key == "units") {
      out += "# units: " + std::string(unit_name(file.unit)) + "\n";
      wrote_units = true;
    } else {
      out += "# " + key + ": " + value + "\n";
    }
  }
  if (!wrote_units) out = "# units: " + std::string(unit_name(file.unit)) + "\n" + out;
  out += "node";
  for (const auto& n : file.nodes) out += "," + n;
  out += "\n";
  for (Index i = 0; i < file.raw.rows(); ++i) {
    out += file.nodes[static_cast<std::size_t>(i)];
    for (Index j = 0; j < file.raw.cols(); ++j) out += "," + format_number(file.raw(i, j));
    out += "\n";
  }
  return out;
}

MaxwellFile make_maxwell_file(const MaxwellMatrix& m, CapacitanceUnit unit,
                              std::vector<std::pair<std::string, std::string>> extra_headers) {
  MaxwellFile f;
  f.unit = unit;
  f.headers.emplace_back("units", std::string(unit_name(unit)));
  for (auto& h : extra_headers) f.headers.push_back(std::move(h));
  f.nodes = m.nodes;
  f.raw = m.capacitance / unit_scale(unit);
  return f;
}

}  // namespace lomq::io
