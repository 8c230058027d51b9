// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

// SI values, exact since the 2019 redefinition.
namespace lomq::constants {

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double speed_of_light = 299792458.0;  // m/s

/// Reduced flux quantum hbar / 2e.
inline constexpr double reduced_flux_quantum = hbar / (2.0 * elementary_charge);
/// Superconducting flux quantum h / 2e.
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);

}  // namespace lomq::constants
