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

#ifndef CHFKIT_CORRELATIONS_H_
#define CHFKIT_CORRELATIONS_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "chfkit/props.h"

namespace chfkit {

/// Annulus with a heated inner rod and an unheated outer wall.
class AnnulusGeometry {
 public:
  /// Throws InvalidGeometry unless 0 < d_inner < d_outer.
  AnnulusGeometry(double d_outer_m, double d_inner_m);

  double d_outer() const { return d_outer_; }
  double d_inner() const { return d_inner_; }
  double flow_area() const;         // m^2
  double heated_perimeter() const;  // m
  double heated_equivalent_diameter() const;  // m

 private:
  double d_outer_;
  double d_inner_;
};

/// (d_o^2 - d_i^2) / d_i, the 4 A / P_heated diameter of an annulus heated on
/// its inner wall. Throws InvalidGeometry unless 0 < d_i < d_o.
double heated_equivalent_diameter(double d_outer_m, double d_inner_m);

/// The five model inputs.
struct OperatingPoint {
  double d_he;       // heated equivalent diameter, m
  double length;     // heated length, m
  double pressure;   // MPa
  double mass_flux;  // kg/m^2/s
  double dh_sub_in;  // inlet subcooling, kJ/kg
};

/// True when every field is finite, strictly positive, and dh_sub_in >= 0.
bool is_valid(const OperatingPoint& op);

enum class CorrelationId { kBiasi, kBowring, kKatto };

inline constexpr std::array<CorrelationId, 3> kAllCorrelations = {
    CorrelationId::kBiasi, CorrelationId::kBowring, CorrelationId::kKatto};

std::string_view to_string(CorrelationId id);
/// Accepts "biasi", "bowring", "katto". Returns nullopt otherwise.
std::optional<CorrelationId> parse_correlation(std::string_view name);

/// The two branches of the Biasi correlation, kW/m^2, before the max.
struct BiasiBranches {
  double low_quality;
  double high_quality;
};

/// Raw branch values. Defined for any quality (including x >= 1); used by the
/// heat-balance solver, which must evaluate past the physical range.
BiasiBranches biasi_branches(double x_e, double d_he_m, double g, double p_mpa);

/// Biasi local-conditions CHF (kW/m^2) with the heated equivalent diameter as
/// the diameter argument. Throws DomainError when x_e >= 1 or both branches
/// are nonpositive.
double biasi_local(double x_e, double d_he_m, double g, double p_mpa);

/// Bowring inlet-conditions CHF (kW/m^2).
double bowring_inlet(const OperatingPoint& op);

/// Katto generalized correlation with inlet-subcooling correction (kW/m^2).
/// `props` must be the saturation properties at op.pressure.
double katto_annulus(const OperatingPoint& op, const SatProps& props);

/// Outlet equilibrium quality from the channel energy balance for a uniform
/// heat flux `q_kw_m2` on the heated perimeter.
double exit_quality(double q_kw_m2, const OperatingPoint& op,
                    const SatProps& props);

struct HeatBalanceOptions {
  double q_lo = 1.0;       // kW/m^2
  double q_hi = 20000.0;   // kW/m^2
  double rel_tol = 1e-6;
  int max_iterations = 200;
};

/// Biasi fixed-point gap f(x_e(q)) - q (kW/m^2), the function bisected by
/// heat_balance_chf. Strictly decreasing in q.
double biasi_balance_gap(double q_kw_m2, const OperatingPoint& op,
                         const SatProps& props);

/// CHF consistent with the channel heat balance. For Biasi this is the fixed
/// point q = f(x_e(q)) found by bisection; Bowring and Katto already take
/// inlet conditions and are evaluated directly.
///
/// Throws NoRoot when the bracket holds no sign change and NoConvergence when
/// bisection exhausts its iteration budget.
double heat_balance_chf(CorrelationId corr, const OperatingPoint& op,
                        const HeatBalanceOptions& opts = {});

/// Closed box of operating conditions plus measured CHF.
struct Envelope {
  double d_he_mm[2];
  double length_m[2];
  double pressure_mpa[2];
  double mass_flux[2];
  double dh_sub_in[2];
  double q_cr[2];
};

/// Combined range of the four annulus datasets (Becker, Beus, Janssen,
/// Mortimore).
inline constexpr Envelope kAnnulusEnvelope = {
    .d_he_mm = {11.30, 96.30},
    .length_m = {0.74, 3.60},
    .pressure_mpa = {4.13, 15.55},
    .mass_flux = {249.0, 5913.0},
    .dh_sub_in = {6.98, 1163.03},
    .q_cr = {323.0, 6000.0},
};

}  // namespace chfkit

#endif  // CHFKIT_CORRELATIONS_H_
