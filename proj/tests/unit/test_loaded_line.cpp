// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "lomq/constants.hpp"
#include "lomq/error.hpp"
#include "lomq/loaded_line.hpp"

namespace lomq {
namespace {

constexpr double kPi = std::numbers::pi;
using boost::math::quadrature::gauss_kronrod;

LoadedLineSpec random_spec(std::mt19937_64& rng, Termination term) {
  std::uniform_real_distribution<double> length(2e-3, 20e-3), z0(20, 100), v(0.3, 0.9), load(0, 800e-15);
  return LoadedLineSpec::from_impedance(length(rng), z0(rng), v(rng) * constants::speed_of_light, load(rng), term);
}

TEST(LineSpec, ImpedanceRoundTrip) {
  const auto s = LoadedLineSpec::from_impedance(5e-3, 53.0, 1.2e8, 1e-13);
  EXPECT_NEAR(s.impedance(), 53.0, 1e-12);
  EXPECT_NEAR(s.phase_velocity(), 1.2e8, 1e-4);
  EXPECT_NEAR(s.knee_frequency(), 1.0 / (1e-13 * 53.0), 1e-3);
  EXPECT_TRUE(std::isinf(s.with_load(0).knee_frequency()));
}

TEST(LineSpec, ValidationRejectsBadValues) {
  EXPECT_THROW(LoadedLineSpec::from_impedance(-1e-3, 50, 1e8, 0).validate(), Error);
  EXPECT_THROW(LoadedLineSpec::from_impedance(1e-3, 50, 1e8, -1e-15).validate(), Error);
  EXPECT_THROW(solve_modes(LoadedLineSpec::from_impedance(1e-3, 50, 1e8, 0), 0), Error);
}

TEST(Modes, UnloadedOpenAndShortAreAnalytic) {
  const double v = 1.2e8, length = 7e-3;
  const ModeSet open = solve_modes(LoadedLineSpec::from_impedance(length, 50, v, 0), 5);
  ASSERT_TRUE(open.dc_mode.has_value());
  for (int m = 1; m <= 5; ++m) {
    EXPECT_NEAR(open.modes[m - 1].omega, m * kPi * v / length, 1e-12 * open.modes[m - 1].omega);
  }
  const ModeSet shorted = solve_modes(LoadedLineSpec::from_impedance(length, 50, v, 0, Termination::Short), 5);
  EXPECT_FALSE(shorted.dc_mode.has_value());
  EXPECT_EQ(shorted.modes[0].index, 0);
  for (int m = 0; m < 5; ++m) {
    EXPECT_NEAR(shorted.modes[m].omega, (m + 0.5) * kPi * v / length, 1e-12 * shorted.modes[m].omega);
  }
}

TEST(Modes, HeavyLoadApproachesShortWithKneeCorrection) {
  const double v = 1.2e8, length = 7e-3, z0 = 50;
  const double omega1 = kPi * v / length;
  for (double ratio : {1e2, 1e4, 1e6}) {
    const auto spec = LoadedLineSpec::from_impedance(length, z0, v, ratio / (omega1 * z0));
    const ModeSet modes = solve_modes(spec, 3);
    for (int m = 1; m <= 3; ++m) {
      const double limit = (m - 0.5) * kPi * v / length;
      // atan(w/w_L) = pi/2 - w_L/w + ..., so w L/v sits w_L/w above the limit.
      const double predicted = spec.knee_frequency() / limit / ((m - 0.5) * kPi);
      EXPECT_NEAR((modes.modes[m - 1].omega - limit) / limit, predicted, 0.05 * predicted);
    }
  }
}

TEST(Modes, RootsSolveTheCharacteristicEquation) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto spec = random_spec(rng, trial % 2 ? Termination::Short : Termination::Open);
    const ModeSet modes = solve_modes(spec, 6);
    for (const auto& mode : modes.modes) {
      EXPECT_LT(characteristic_residual(spec, mode.omega, mode.index), 1e-12);
      const double target = mode.index * kPi + spec.termination_index() * kPi / 2;
      EXPECT_NEAR(mode.omega * spec.length / spec.phase_velocity() + std::atan(mode.omega / spec.knee_frequency()),
                  target, 1e-11 * target);
    }
    for (std::size_t k = 1; k < modes.modes.size(); ++k) EXPECT_GT(modes.modes[k].omega, modes.modes[k - 1].omega);
  }
}

TEST(Modes, LoadingLowersEveryMode) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = random_spec(rng, Termination::Open);
    double previous[4] = {INFINITY, INFINITY, INFINITY, INFINITY};
    for (double load : {0.0, 50e-15, 200e-15, 800e-15, 3e-12}) {
      const ModeSet modes = solve_modes(base.with_load(load), 4);
      for (int m = 0; m < 4; ++m) {
        EXPECT_LT(modes.modes[m].omega, previous[m]);
        previous[m] = modes.modes[m].omega;
      }
    }
  }
}

TEST(Modes, LoadParticipationVanishesInBothLimits) {
  const auto base = LoadedLineSpec::from_impedance(6e-3, 50.0, 1.2e8, 0.0);
  EXPECT_EQ(solve_modes(base, 1).modes[0].load_participation, 0.0);
  const double light = solve_modes(base.with_load(1e-15), 1).modes[0].load_participation;
  const double medium = solve_modes(base.with_load(300e-15), 1).modes[0].load_participation;
  const double heavy = solve_modes(base.with_load(1e-9), 1).modes[0].load_participation;
  // A heavy load pins the voltage at z = 0, so its share of the energy falls again.
  EXPECT_LT(light, medium);
  EXPECT_LT(heavy, medium);
  EXPECT_LT(heavy, 1e-2);
}

TEST(Modes, QuotedLoadingShift) {
  // 53 ohm, 0.403 c, 320 fF load: 8.8 GHz unloaded moves to about 7.0 GHz.
  const auto unloaded = LoadedLineSpec::from_impedance(1.0, 53.0, 0.403 * constants::speed_of_light, 0);
  const double length = calibrate_length(2 * kPi * 8.8e9, 1, unloaded);
  const double f = solve_modes(unloaded.with_length(length).with_load(320e-15), 1).modes[0].omega / (2 * kPi);
  EXPECT_NEAR(f, 7.0e9, 0.1e9);
}

TEST(Fields, NormIntegralMatchesQuadrature) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_spec(rng, trial % 2 ? Termination::Short : Termination::Open);
    for (const auto& mode : solve_modes(spec, 4).modes) {
      auto u2 = [&](double z) { return mode.field(z) * mode.field(z); };
      const double q = gauss_kronrod<double, 61>::integrate(u2, 0.0, spec.length, 8, 1e-14);
      EXPECT_NEAR(field_norm_integral(spec, mode), q, 1e-12 * q);
    }
  }
}

TEST(Fields, BoundaryConditions) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const auto open = random_spec(rng, Termination::Open);
    const auto s = LoadedLineSpec::from_per_length(open.length, open.capacitance_per_length,
                                                   open.inductance_per_length, open.load_capacitance,
                                                   Termination::Short);
    for (const auto& mode : solve_modes(open, 3).modes) {
      // Open end: no current, so du/dz = -k sin(kL + phi) vanishes.
      EXPECT_NEAR(std::sin(mode.wavenumber * open.length + mode.phase), 0.0, 1e-9);
    }
    for (const auto& mode : solve_modes(s, 3).modes) EXPECT_NEAR(mode.field(s.length), 0.0, 1e-9);
  }
}

TEST(Epr, ParticipationsCloseAndZpfMatchesLoad) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_spec(rng, trial % 2 ? Termination::Short : Termination::Open);
    for (const auto& mode : solve_modes(spec, 5).modes) {
      const double p_l = epr_loading(spec, mode);
      EXPECT_GE(p_l, 0.0);
      EXPECT_LE(p_l, 1.0);
      auto density = [&](double z) { return epr_density(spec, mode, z); };
      const double line = gauss_kronrod<double, 61>::integrate(density, 0.0, spec.length, 8, 1e-14);
      EXPECT_NEAR(p_l + line, 1.0, 1e-12);

      const ZeroPointFluctuations z = zpf(spec, mode);
      // Charge on the load is C_L times its voltage, V = w Phi.
      EXPECT_NEAR(z.load_charge, spec.load_capacitance * mode.omega * std::abs(z.flux(0.0)),
                  1e-12 * (z.load_charge + 1e-30));
      EXPECT_NEAR(z.charge_density(spec.length / 3),
                  spec.capacitance_per_length * mode.omega * z.flux(spec.length / 3),
                  1e-12 * std::abs(z.charge_density(spec.length / 3)) + 1e-40);
    }
  }
}

TEST(Calibration, LengthRoundTrip) {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> freq(3e9, 12e9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = random_spec(rng, trial % 2 ? Termination::Short : Termination::Open);
    const int m = spec.first_mode() + static_cast<int>(rng() % 3);
    const double omega = 2 * kPi * freq(rng);
    const double length = calibrate_length(omega, m, spec);
    EXPECT_GT(length, 0.0);
    EXPECT_NEAR(solve_mode_frequency(spec.with_length(length), m), omega, 1e-12 * omega);
  }
}

TEST(Calibration, RejectsNonPositiveTarget) {
  const auto spec = LoadedLineSpec::from_impedance(1e-3, 50, 1e8, 1e-13);
  try {
    calibrate_length(0.0, 1, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidTarget);
  }
}

}  // namespace
}  // namespace lomq
