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

#include "chfkit/correlations.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chfkit/error.h"

namespace chfkit {

AnnulusGeometry::AnnulusGeometry(double d_outer_m, double d_inner_m)
    : d_outer_(d_outer_m), d_inner_(d_inner_m) {
  if (!(d_inner_m > 0.0) || !(d_outer_m > d_inner_m) ||
      !std::isfinite(d_outer_m)) {
    std::ostringstream msg;
    msg << "invalid annulus: need 0 < d_i < d_o, got d_o=" << d_outer_m
        << " d_i=" << d_inner_m;
    throw InvalidGeometry(msg.str());
  }
}

double AnnulusGeometry::flow_area() const {
  return std::numbers::pi *
         (d_outer_ * d_outer_ - d_inner_ * d_inner_) / 4.0;
}

double AnnulusGeometry::heated_perimeter() const {
  return std::numbers::pi * d_inner_;
}

double AnnulusGeometry::heated_equivalent_diameter() const {
  return (d_outer_ * d_outer_ - d_inner_ * d_inner_) / d_inner_;
}

double heated_equivalent_diameter(double d_outer_m, double d_inner_m) {
  return AnnulusGeometry(d_outer_m, d_inner_m).heated_equivalent_diameter();
}

bool is_valid(const OperatingPoint& op) {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  return pos(op.d_he) && pos(op.length) && pos(op.pressure) &&
         pos(op.mass_flux) && std::isfinite(op.dh_sub_in) &&
         op.dh_sub_in >= 0.0;
}

std::string_view to_string(CorrelationId id) {
  switch (id) {
    case CorrelationId::kBiasi:
      return "biasi";
    case CorrelationId::kBowring:
      return "bowring";
    case CorrelationId::kKatto:
      return "katto";
  }
  return "unknown";
}

std::optional<CorrelationId> parse_correlation(std::string_view name) {
  for (CorrelationId id : kAllCorrelations) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

namespace {

void require_valid(const OperatingPoint& op, const char* who) {
  if (!is_valid(op)) {
    throw DomainError(std::string(who) + ": invalid operating point");
  }
}

// ---------------------------------------------------------------------------
// Biasi, Clerici, Garribba, Sala, Tozzi, "Studies on burnout, Part 3",
// Energia Nucleare 14 (1967) 530-536. Native units: D in cm, G in g/cm^2/s,
// P in bar, q in W/cm^2.

namespace biasi {
constexpr double kLowCoeff = 1883.0;
constexpr double kHighCoeff = 3780.0;
constexpr double kLowMassExp = 1.0 / 6.0;
constexpr double kHighMassExp = 0.6;
constexpr double kDiameterExpSmall = 0.6;  // D < 1 cm
constexpr double kDiameterExpLarge = 0.4;  // D >= 1 cm

double pressure_f(double p_bar) {
  return 0.7249 + 0.099 * p_bar * std::exp(-0.032 * p_bar);
}

double pressure_h(double p_bar) {
  return -1.159 + 0.149 * p_bar * std::exp(-0.019 * p_bar) +
         8.99 * p_bar / (10.0 + p_bar * p_bar);
}
}  // namespace biasi

// ---------------------------------------------------------------------------
// Bowring, "A simple but accurate round tube, uniform heat flux, dryout
// correlation over the pressure range 0.7-17 MN/m2", AEEW-R 789 (1972).
// SI form with h in kJ/kg so that q comes out in kW/m^2.

namespace bowring {
constexpr double kReducedPressurePerMPa = 0.145;
constexpr double kMassFluxRef = 1356.0;  // kg/m^2/s

struct Factors {
  double f1, f2, f3, f4, n;
};

Factors pressure_factors(double p_mpa) {
  const double pr = kReducedPressurePerMPa * p_mpa;
  Factors f{};
  f.n = 2.0 - 0.5 * pr;
  if (pr < 1.0) {
    f.f1 = (std::pow(pr, 18.942) * std::exp(20.89 * (1.0 - pr)) + 0.917) /
           1.917;
    f.f2 = 1.309 * f.f1 /
           (std::pow(pr, 1.316) * std::exp(2.444 * (1.0 - pr)) + 0.309);
    f.f3 = (std::pow(pr, 17.023) * std::exp(16.658 * (1.0 - pr)) + 0.667) /
           1.667;
  } else {
    f.f1 = std::pow(pr, -0.368) * std::exp(0.648 * (1.0 - pr));
    f.f2 = f.f1 / (std::pow(pr, -0.448) * std::exp(0.245 * (1.0 - pr)));
    f.f3 = std::pow(pr, 0.219);
  }
  f.f4 = f.f3 * std::pow(pr, 1.649);
  return f;
}
}  // namespace bowring

// ---------------------------------------------------------------------------
// Katto, "Generalized correlations of critical heat flux for the forced
// convection boiling in vertical uniformly heated annuli", Int. J. Heat Mass
// Transfer 22 (1979) 575-584, with the regime constants as consolidated in
// Katto and Ohno, Int. J. Heat Mass Transfer 27 (1984) 1641-1648. The round
// tube diameter is replaced by the heated equivalent diameter.

namespace katto {
constexpr double kDensityRatioSplit = 0.15;

double l_regime_c(double l_over_d) {
  if (l_over_d < 50.0) return 0.25;
  if (l_over_d > 150.0) return 0.34;
  return 0.25 + 0.0009 * (l_over_d - 50.0);
}
}  // namespace katto

}  // namespace

BiasiBranches biasi_branches(double x_e, double d_he_m, double g,
                             double p_mpa) {
  const double d_cm = d_he_m * 100.0;
  const double g_cgs = g / 10.0;
  const double p_bar = p_mpa * 10.0;
  const double n = d_cm >= 1.0 ? biasi::kDiameterExpLarge
                               : biasi::kDiameterExpSmall;
  const double d_term = std::pow(d_cm, n);
  const double g_sixth = std::pow(g_cgs, biasi::kLowMassExp);
  const double low = biasi::kLowCoeff / (d_term * g_sixth) *
                     (biasi::pressure_f(p_bar) / g_sixth - x_e);
  const double high = biasi::kHighCoeff * biasi::pressure_h(p_bar) /
                      (d_term * std::pow(g_cgs, biasi::kHighMassExp)) *
                      (1.0 - x_e);
  // W/cm^2 -> kW/m^2
  return {.low_quality = low * 10.0, .high_quality = high * 10.0};
}

double biasi_local(double x_e, double d_he_m, double g, double p_mpa) {
  if (!(x_e < 1.0) || !(d_he_m > 0.0) || !(g > 0.0) || !(p_mpa > 0.0)) {
    throw DomainError("biasi: inputs outside the correlation's domain");
  }
  const BiasiBranches b = biasi_branches(x_e, d_he_m, g, p_mpa);
  const double q = std::max(b.low_quality, b.high_quality);
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw DomainError("biasi: nonpositive CHF at x_e=" + std::to_string(x_e));
  }
  return q;
}

double bowring_inlet(const OperatingPoint& op) {
  require_valid(op, "bowring");
  const SatProps props = sat_props(op.pressure);
  const bowring::Factors f = bowring::pressure_factors(op.pressure);
  const double d = op.d_he;
  const double g = op.mass_flux;
  const double a = 2.317 * (props.h_fg * d * g / 4.0) * f.f1 /
                   (1.0 + 0.0143 * f.f2 * std::sqrt(d) * g);
  const double c = 0.077 * f.f3 * d * g /
                   (1.0 + 0.347 * f.f4 * std::pow(g / bowring::kMassFluxRef, f.n));
  if (!(a > 0.0) || !(c > 0.0) || !std::isfinite(a) || !std::isfinite(c)) {
    throw DomainError("bowring: nonpositive internal factor");
  }
  const double q = (a + 0.25 * d * g * op.dh_sub_in) / (c + op.length);
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw DomainError("bowring: nonpositive CHF");
  }
  return q;
}

double katto_annulus(const OperatingPoint& op, const SatProps& props) {
  require_valid(op, "katto");
  const double density_ratio = props.rho_g / props.rho_f;
  // Inverse Weber number sigma rho_f / (G^2 L).
  const double inv_weber = props.sigma * props.rho_f /
                           (op.mass_flux * op.mass_flux * op.length);
  const double l_over_d = op.length / op.d_he;
  const double c = katto::l_regime_c(l_over_d);
  const double axial = 1.0 + 0.0031 * l_over_d;

  const double q1 = c * std::pow(inv_weber, 0.043) / l_over_d;
  const double q2 = 0.10 * std::pow(density_ratio, 0.133) *
                    std::pow(inv_weber, 1.0 / 3.0) / axial;
  const double q3 = 0.098 * std::pow(density_ratio, 0.133) *
                    std::pow(inv_weber, 0.433) * std::pow(l_over_d, 0.27) /
                    axial;
  const double q4 = 0.0384 * std::pow(density_ratio, 0.6) *
                    std::pow(inv_weber, 0.173) /
                    (1.0 + 0.280 * std::pow(inv_weber, 0.233) * l_over_d);
  const double q5 = 0.234 * std::pow(density_ratio, 0.513) *
                    std::pow(inv_weber, 0.433) * std::pow(l_over_d, 0.27) /
                    axial;

  double q_c0 = 0.0;
  if (density_ratio < katto::kDensityRatioSplit) {
    if (q1 < q2) {
      q_c0 = q1;
    } else {
      q_c0 = q2 < q3 ? q2 : q3;
    }
  } else {
    if (q1 < q5) {
      q_c0 = q1;
    } else {
      q_c0 = q5 > q4 ? q5 : q4;
    }
  }

  const double k1 = 1.043 / (4.0 * c * std::pow(inv_weber, 0.043));
  const double k2 = (5.0 / 6.0) * (0.0124 + 1.0 / l_over_d) /
                    (std::pow(density_ratio, 0.133) *
                     std::pow(inv_weber, 1.0 / 3.0));
  const double k3 = 1.12 * (1.52 * std::pow(inv_weber, 0.233) + 1.0 / l_over_d) /
                    (std::pow(density_ratio, 0.6) * std::pow(inv_weber, 0.173));
  double k = 0.0;
  if (k1 > k2) {
    k = k1;
  } else {
    k = k2 < k3 ? k2 : k3;
  }

  if (!(q_c0 > 0.0) || !std::isfinite(q_c0) || !std::isfinite(k)) {
    throw DomainError("katto: regime selection undefined for inputs");
  }
  // Dimensionless q_c0 / (G h_fg); h_fg in kJ/kg gives kW/m^2.
  const double q_sat = q_c0 * op.mass_flux * props.h_fg;
  if (op.dh_sub_in == 0.0) return q_sat;
  return q_sat * (1.0 + k * op.dh_sub_in / props.h_fg);
}

double exit_quality(double q_kw_m2, const OperatingPoint& op,
                    const SatProps& props) {
  return 4.0 * q_kw_m2 * op.length / (op.d_he * op.mass_flux * props.h_fg) -
         op.dh_sub_in / props.h_fg;
}

double biasi_balance_gap(double q_kw_m2, const OperatingPoint& op,
                         const SatProps& props) {
  const double x = exit_quality(q_kw_m2, op, props);
  const BiasiBranches b = biasi_branches(x, op.d_he, op.mass_flux, op.pressure);
  return std::max(b.low_quality, b.high_quality) - q_kw_m2;
}

double heat_balance_chf(CorrelationId corr, const OperatingPoint& op,
                        const HeatBalanceOptions& opts) {
  switch (corr) {
    case CorrelationId::kBowring:
      return bowring_inlet(op);
    case CorrelationId::kKatto:
      require_valid(op, "katto");
      return katto_annulus(op, sat_props(op.pressure));
    case CorrelationId::kBiasi:
      break;
  }

  require_valid(op, "biasi");
  const SatProps props = sat_props(op.pressure);
  double lo = opts.q_lo;
  double hi = opts.q_hi;
  const double gap_lo = biasi_balance_gap(lo, op, props);
  const double gap_hi = biasi_balance_gap(hi, op, props);
  if (!(gap_lo > 0.0 && gap_hi < 0.0)) {
    std::ostringstream msg;
    msg << "biasi heat balance: no sign change on [" << lo << ", " << hi
        << "] kW/m^2 (gap " << gap_lo << ", " << gap_hi << ")";
    throw NoRoot(msg.str());
  }
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gap = biasi_balance_gap(mid, op, props);
    // Converge to half the requested residual tolerance.
    if (std::abs(gap) <= 0.5 * opts.rel_tol * mid) return mid;
    if (gap > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NoConvergence("biasi heat balance: bisection did not converge in " +
                      std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace chfkit
