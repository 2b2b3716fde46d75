// Copyright 2026 The chfkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chfkit/props.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "chfkit/error.h"

namespace chfkit {
namespace {

TEST(SatProps, LatentHeatAtSevenMegapascalMatchesSteamTable) {
  // Saturated water/steam at 7 MPa (IAPWS-IF97, e.g. NIST webbook):
  // T_sat = 285.83 C, h_f = 1267.4 kJ/kg, h_g = 2772.6 kJ/kg.
  constexpr double kPublishedHfg = 1505.1;
  const SatProps s = sat_props(7.0);
  EXPECT_LT(std::abs(s.h_fg - kPublishedHfg) / kPublishedHfg, 0.005);
  EXPECT_NEAR(s.h_f, 1267.4, 0.005 * 1267.4);
}

TEST(SatProps, ExactAtNodes) {
  for (const SatProps& node : sat_table()) {
    const SatProps s = sat_props(node.p);
    EXPECT_EQ(s.h_f, node.h_f);
    EXPECT_EQ(s.h_fg, node.h_fg);
    EXPECT_EQ(s.rho_f, node.rho_f);
    EXPECT_EQ(s.rho_g, node.rho_g);
    EXPECT_EQ(s.sigma, node.sigma);
  }
}

TEST(SatProps, MidpointIsArithmeticMean) {
  const auto table = sat_table();
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    const SatProps& a = table[i];
    const SatProps& b = table[i + 1];
    const SatProps s = sat_props(0.5 * (a.p + b.p));
    EXPECT_NEAR(s.h_f, 0.5 * (a.h_f + b.h_f), 1e-12 * a.h_f);
    EXPECT_NEAR(s.h_fg, 0.5 * (a.h_fg + b.h_fg), 1e-12 * a.h_fg);
    EXPECT_NEAR(s.rho_f, 0.5 * (a.rho_f + b.rho_f), 1e-12 * a.rho_f);
    EXPECT_NEAR(s.rho_g, 0.5 * (a.rho_g + b.rho_g), 1e-12 * b.rho_g);
    EXPECT_NEAR(s.sigma, 0.5 * (a.sigma + b.sigma), 1e-12 * a.sigma);
  }
}

TEST(SatProps, TableCoversRangeEveryHalfMegapascal) {
  const auto table = sat_table();
  ASSERT_EQ(table.size(), 42u);
  for (std::size_t i = 0; i < table.size(); ++i) {
    EXPECT_DOUBLE_EQ(table[i].p, 0.5 * static_cast<double>(i + 1));
  }
}

TEST(SatProps, RejectsOutOfRangePressure) {
  EXPECT_THROW(sat_props(0.49), PressureOutOfRange);
  EXPECT_THROW(sat_props(21.01), PressureOutOfRange);
  EXPECT_THROW(sat_props(std::nan("")), PressureOutOfRange);
  EXPECT_NO_THROW(sat_props(0.5));
  EXPECT_NO_THROW(sat_props(21.0));
}

TEST(SatProps, InvariantsHoldOverSweep) {
  for (int i = 0; i <= 205; ++i) {
    const SatProps s = sat_props(std::min(21.0, 0.5 + 0.1 * i));
    EXPECT_GT(s.h_fg, 0.0);
    EXPECT_GT(s.rho_f, s.rho_g);
    EXPECT_GT(s.rho_g, 0.0);
    EXPECT_GT(s.sigma, 0.0);
  }
}

TEST(SatProps, MonotoneOverSweep) {
  SatProps prev = sat_props(0.5);
  for (int i = 1; i <= 205; ++i) {
    const SatProps s = sat_props(std::min(21.0, 0.5 + 0.1 * i));
    EXPECT_LT(s.h_fg, prev.h_fg) << "p=" << s.p;
    EXPECT_GT(s.rho_g, prev.rho_g) << "p=" << s.p;
    EXPECT_LT(s.sigma, prev.sigma) << "p=" << s.p;
    prev = s;
  }
}

TEST(SatProps, Continuous) {
  constexpr double kEps = 1e-6;
  for (double p = 0.5; p + kEps <= 21.0; p += 0.037) {
    const SatProps a = sat_props(p);
    const SatProps b = sat_props(p + kEps);
    EXPECT_LT(std::abs(b.h_f - a.h_f) / a.h_f, 1e-4);
    EXPECT_LT(std::abs(b.h_fg - a.h_fg) / a.h_fg, 1e-4);
    EXPECT_LT(std::abs(b.rho_f - a.rho_f) / a.rho_f, 1e-4);
    EXPECT_LT(std::abs(b.rho_g - a.rho_g) / a.rho_g, 1e-4);
    EXPECT_LT(std::abs(b.sigma - a.sigma) / a.sigma, 1e-4);
  }
  // Across a node.
  const SatProps below = sat_props(7.0 - kEps);
  const SatProps above = sat_props(7.0 + kEps);
  EXPECT_LT(std::abs(above.h_fg - below.h_fg) / below.h_fg, 1e-4);
}

}  // namespace
}  // namespace chfkit
