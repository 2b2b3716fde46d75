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

#include <array>
#include <cmath>
#include <string>

#include "chfkit/error.h"

namespace chfkit {
namespace {

// Saturated water and steam, IAPWS-IF97 (regions 1 and 2 on the saturation
// line) with surface tension from the IAPWS 1994 release. Enthalpies are
// rounded to 0.01 kJ/kg, densities to 1e-3 (liquid) and 1e-4 (vapor) kg/m^3.
//   p (MPa), h_f (kJ/kg), h_fg (kJ/kg), rho_f, rho_g (kg/m^3), sigma (N/m)
constexpr std::array<SatProps, 42> kTable = {{
    {0.5, 640.19, 2107.92, 915.284, 2.6681, 4.834907e-02},
    {1.0, 762.68, 2014.44, 887.127, 5.1454, 4.221575e-02},
    {1.5, 844.72, 1946.29, 866.650, 7.5929, 3.806337e-02},
    {2.0, 908.62, 1889.76, 849.798, 10.0421, 3.483043e-02},
    {2.5, 961.98, 1840.06, 835.116, 12.5082, 3.214643e-02},
    {3.0, 1008.37, 1794.89, 821.895, 15.0006, 2.983378e-02},
    {3.5, 1049.78, 1752.97, 809.728, 17.5260, 2.779218e-02},
    {4.0, 1087.43, 1713.47, 798.358, 20.0898, 2.595887e-02},
    {4.5, 1122.14, 1675.85, 787.611, 22.6967, 2.429170e-02},
    {5.0, 1154.50, 1639.73, 777.360, 25.3509, 2.276090e-02},
    {5.5, 1184.92, 1604.79, 767.512, 28.0567, 2.134452e-02},
    {6.0, 1213.73, 1570.83, 757.993, 30.8179, 2.002594e-02},
    {6.5, 1241.17, 1537.66, 748.746, 33.6388, 1.879220e-02},
    {7.0, 1267.44, 1505.13, 739.724, 36.5236, 1.763299e-02},
    {7.5, 1292.70, 1473.12, 730.885, 39.4769, 1.653998e-02},
    {8.0, 1317.08, 1441.53, 722.197, 42.5034, 1.550634e-02},
    {8.5, 1340.70, 1410.26, 713.630, 45.6084, 1.452636e-02},
    {9.0, 1363.65, 1379.23, 705.158, 48.7973, 1.359526e-02},
    {9.5, 1386.02, 1348.37, 696.759, 52.0764, 1.270900e-02},
    {10.0, 1407.87, 1317.61, 688.411, 55.4521, 1.186410e-02},
    {10.5, 1429.27, 1286.88, 680.096, 58.9319, 1.105758e-02},
    {11.0, 1450.28, 1256.12, 671.796, 62.5239, 1.028685e-02},
    {11.5, 1470.95, 1225.26, 663.492, 66.2372, 9.549660e-03},
    {12.0, 1491.33, 1194.26, 655.167, 70.0822, 8.844053e-03},
    {12.5, 1511.46, 1163.02, 646.800, 74.0707, 8.168312e-03},
    {13.0, 1531.40, 1131.49, 638.371, 78.2159, 7.520936e-03},
    {13.5, 1551.19, 1099.58, 629.856, 82.5334, 6.900610e-03},
    {14.0, 1570.88, 1067.21, 621.229, 87.0408, 6.306187e-03},
    {14.5, 1590.51, 1034.29, 612.459, 91.7588, 5.736674e-03},
    {15.0, 1610.15, 1000.71, 603.514, 96.7109, 5.191214e-03},
    {15.5, 1629.85, 966.37, 594.358, 101.9250, 4.669083e-03},
    {16.0, 1649.67, 931.13, 584.954, 107.4330, 4.169685e-03},
    {16.5, 1669.68, 894.88, 575.264, 113.2726, 3.692550e-03},
    {17.0, 1690.04, 857.38, 565.181, 119.4837, 3.237337e-03},
    {17.5, 1710.76, 818.35, 554.674, 126.1541, 2.803847e-03},
    {18.0, 1732.02, 777.51, 543.628, 133.3570, 2.392040e-03},
    {18.5, 1753.99, 734.42, 531.915, 141.2074, 2.002066e-03},
    {19.0, 1776.89, 688.52, 519.358, 149.8665, 1.634318e-03},
    {19.5, 1801.08, 638.92, 505.696, 159.5719, 1.289519e-03},
    {20.0, 1827.10, 584.29, 490.521, 170.6987, 9.688797e-04},
    {20.5, 1855.90, 522.26, 473.130, 183.8987, 6.744090e-04},
    {21.0, 1889.40, 448.15, 452.108, 200.4940, 4.096086e-04},
}};

constexpr double kNodeSpacing = 0.5;

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

std::span<const SatProps> sat_table() { return kTable; }

SatProps sat_props(double p_mpa) {
  if (!(p_mpa >= kSatPressureMin && p_mpa <= kSatPressureMax)) {
    throw PressureOutOfRange("saturation pressure " + std::to_string(p_mpa) +
                             " MPa outside [0.5, 21.0]");
  }
  // Node i sits at 0.5 * (i + 1) MPa.
  std::size_t lo = static_cast<std::size_t>(
      std::floor((p_mpa - kSatPressureMin) / kNodeSpacing));
  if (lo >= kTable.size() - 1) lo = kTable.size() - 2;
  const SatProps& a = kTable[lo];
  const SatProps& b = kTable[lo + 1];
  if (p_mpa == a.p) return a;
  if (p_mpa == b.p) return b;
  const double t = (p_mpa - a.p) / (b.p - a.p);
  return SatProps{
      .p = p_mpa,
      .h_f = lerp(a.h_f, b.h_f, t),
      .h_fg = lerp(a.h_fg, b.h_fg, t),
      .rho_f = lerp(a.rho_f, b.rho_f, t),
      .rho_g = lerp(a.rho_g, b.rho_g, t),
      .sigma = lerp(a.sigma, b.sigma, t),
  };
}

}  // namespace chfkit
