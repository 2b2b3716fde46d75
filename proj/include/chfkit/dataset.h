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

#ifndef CHFKIT_DATASET_H_
#define CHFKIT_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chfkit/correlations.h"

namespace chfkit {

/// One experimental CHF measurement.
struct ChfRecord {
  OperatingPoint op;
  double q_cr = 0.0;              // kW/m^2
  std::optional<double> x_e_cr;   // outlet equilibrium quality at CHF
  std::string source;
};

/// Exact CSV header, in column order. d_he is stored in millimetres on disk
/// and in metres in OperatingPoint.
inline constexpr std::string_view kCsvHeader =
    "dhe_mm,length_m,pressure_mpa,mass_flux_kg_m2_s,dh_sub_in_kj_kg,x_e_cr,"
    "q_cr_kw_m2,source";

/// Parses a CSV stream. `origin` names the stream in error messages.
/// Throws SchemaError on a header mismatch and ParseError (with row and
/// column) on a malformed or invalid row. Quoted fields are not supported.
std::vector<ChfRecord> parse_csv(std::istream& in, std::string_view origin);
std::vector<ChfRecord> load_csv(const std::filesystem::path& path);

void write_csv(std::ostream& out, std::span<const ChfRecord> records);
void save_csv(const std::filesystem::path& path,
              std::span<const ChfRecord> records);

enum class EnvelopeField { kDhe, kLength, kPressure, kMassFlux, kDhSubIn, kQcr };
std::string_view to_string(EnvelopeField field);

struct EnvelopeFlag {
  std::size_t index;
  EnvelopeField field;
  double value;
};

struct EnvelopeReport {
  std::size_t n_records = 0;
  std::vector<EnvelopeFlag> flags;

  /// Flags on the five input features, ignoring q_cr.
  std::size_t feature_flag_count() const;
  bool empty() const { return flags.empty(); }
};

/// Flags every record field outside `env`. Advisory only: never throws.
EnvelopeReport validate_envelope(std::span<const ChfRecord> records,
                                 const Envelope& env = kAnnulusEnvelope);

/// Seeded shuffle-and-partition. Index vectors refer to the input order.
struct SplitDataset {
  std::vector<ChfRecord> train;
  std::vector<ChfRecord> validation;
  std::vector<ChfRecord> test;
  std::vector<std::size_t> train_index;
  std::vector<std::size_t> validation_index;
  std::vector<std::size_t> test_index;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinSplitRecords = 20;

/// 5% of n rounded half-up, computed in integers.
std::size_t holdout_size(std::size_t n);

/// Shuffles indices 0..n-1 with Rng(seed), then takes the first n_train as
/// training, the next n_val as validation and the last n_test as test, where
/// n_val = n_test = holdout_size(n). Throws TooFewRecords below 20 records.
SplitDataset split(std::span<const ChfRecord> records, std::uint64_t seed);

/// Builds the partitions from explicit index lists.
SplitDataset split_from_indices(std::span<const ChfRecord> records,
                                std::vector<std::size_t> train,
                                std::vector<std::size_t> validation,
                                std::vector<std::size_t> test,
                                std::uint64_t seed);

inline constexpr std::size_t kFeatureCount = 5;
using Features = std::array<double, kFeatureCount>;

/// (d_he [m], L [m], P [MPa], G [kg/m^2/s], dh_sub_in [kJ/kg]).
Features features_of(const OperatingPoint& op);
OperatingPoint operating_point_of(const Features& f);

/// Per-feature z-score parameters plus the same for the scalar target.
struct StandardizationStats {
  Features feature_mean{};
  Features feature_std{};
  double target_mean = 0.0;
  double target_std = 1.0;

  Features apply(const Features& x) const;
  Features invert(const Features& z) const;
  double apply_target(double y) const;
  double invert_target(double z) const;
};

/// Population mean and standard deviation over the given training rows.
/// Throws DegenerateFeature if fewer than two rows or any std is zero.
StandardizationStats fit_standardizer(std::span<const Features> x,
                                      std::span<const double> y);

struct ResidualRecord {
  OperatingPoint op;
  double residual;  // measured - base, kW/m^2
  CorrelationId base;
};

/// residual_i = q_cr_i - heat_balance_chf(corr, op_i). Correlation errors
/// are rethrown with the record index prepended.
std::vector<ResidualRecord> compute_residuals(
    std::span<const ChfRecord> records, CorrelationId corr);

struct SynthOptions {
  double noise_sigma = 0.03;   // relative Gaussian noise on CHF
  double bias_scale = 1.0;     // multiplies synth_bias()
  Envelope envelope = kAnnulusEnvelope;
};

/// Smooth multiplicative bias applied on top of Bowring by synth_generate:
///   0.25 + 0.15 sG + 0.10 sin(pi sP) - 0.05 sL
/// where sG, sP, sL are mass flux, pressure and length mapped linearly onto
/// [0, 1] across the envelope. Ranges over [0.20, 0.50].
double synth_bias(const OperatingPoint& op, const Envelope& env);

/// n records with features uniform over the envelope and
///   q_cr = bowring_inlet(op) * (1 + bias_scale * synth_bias(op))
///          * (1 + noise_sigma * N(0, 1)).
/// x_e_cr is filled from the heat balance when it lies in [-1, 1).
std::vector<ChfRecord> synth_generate(std::uint64_t seed, std::size_t n,
                                      const SynthOptions& opts = {});

/// FNV-1a 64 hash over the records' exact binary values, as 16 hex digits.
std::string fingerprint(std::span<const ChfRecord> records);

}  // namespace chfkit

#endif  // CHFKIT_DATASET_H_
