// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Report rendering. Machine output is one JSON document per run with every
// number written as {"value": x, "unit": "..."}; it contains no timestamps or
// host data, so identical inputs give identical bytes. Table output is for
// people and may change between versions.

#pragma once

#include <string>

#include "json.hpp"
#include "lomq/io/driver.hpp"

namespace lomq::io {

/// Relative tolerances recorded in the provenance block.
nlohmann::ordered_json tolerance_block();

nlohmann::ordered_json to_json(const AnalysisReport& report);
nlohmann::ordered_json to_json(const SweepResult& sweep);
nlohmann::ordered_json to_json(const BudgetTable& table);
nlohmann::ordered_json to_json(const LineModesReport& modes);

std::string to_table(const AnalysisReport& report);
std::string to_table(const SweepResult& sweep);
std::string to_table(const BudgetTable& table);
std::string to_table(const LineModesReport& modes);

/// Pretty-printed document with a trailing newline.
std::string render_machine(const nlohmann::ordered_json& document);

}  // namespace lomq::io
