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

#ifndef CHFKIT_PROPS_H_
#define CHFKIT_PROPS_H_

#include <span>

namespace chfkit {

/// Water properties on the saturation line at one pressure.
struct SatProps {
  double p;      // MPa
  double h_f;    // saturated-liquid enthalpy, kJ/kg
  double h_fg;   // latent heat of vaporization, kJ/kg
  double rho_f;  // saturated-liquid density, kg/m^3
  double rho_g;  // saturated-vapor density, kg/m^3
  double sigma;  // surface tension, N/m
};

inline constexpr double kSatPressureMin = 0.5;   // MPa
inline constexpr double kSatPressureMax = 21.0;  // MPa

/// Saturation properties at `p_mpa`, linearly interpolated between table
/// nodes spaced 0.5 MPa apart. Exact at nodes.
///
/// Throws PressureOutOfRange outside [0.5, 21.0] MPa.
SatProps sat_props(double p_mpa);

/// The embedded node table, ascending in pressure.
std::span<const SatProps> sat_table();

}  // namespace chfkit

#endif  // CHFKIT_PROPS_H_
