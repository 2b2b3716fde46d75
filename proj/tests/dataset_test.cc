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

#include "chfkit/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "chfkit/error.h"

namespace chfkit {
namespace {

std::string with_header(std::string_view rows) {
  return std::string(kCsvHeader) + "\n" + std::string(rows);
}

std::vector<ChfRecord> parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, "test.csv");
}

TEST(LoadCsv, BeckerMaximaRow) {
  const auto r = parse(with_header("21.82,3.60,7.04,2496,206.84,0.57,2025,becker\n"));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].q_cr, 2025.0);
  EXPECT_DOUBLE_EQ(r[0].op.d_he, 0.02182);
  EXPECT_EQ(r[0].op.length, 3.60);
  EXPECT_EQ(r[0].op.pressure, 7.04);
  EXPECT_EQ(r[0].op.mass_flux, 2496.0);
  EXPECT_EQ(r[0].op.dh_sub_in, 206.84);
  ASSERT_TRUE(r[0].x_e_cr.has_value());
  EXPECT_EQ(*r[0].x_e_cr, 0.57);
  EXPECT_EQ(r[0].source, "becker");
}

TEST(LoadCsv, EmptyBodyGivesNoRecords) {
  EXPECT_TRUE(parse(with_header("")).empty());
}

TEST(LoadCsv, OptionalQualityAndCrlf) {
  const auto r = parse(with_header("13.3,2.13,8.27,677,131.09,,900,mortimore\r\n"));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_FALSE(r[0].x_e_cr.has_value());
  EXPECT_EQ(r[0].source, "mortimore");
}

TEST(LoadCsv, NegativeChfIsParseErrorWithLocus) {
  try {
    parse(with_header("21.82,3.60,7.04,2496,206.84,0.57,-5,becker\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("q_cr_kw_m2"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, MalformedRowsAreParseErrors) {
  EXPECT_THROW(parse(with_header("21.82,3.60,7.04,2496,206.84,0.57,2025\n")), ParseError);
  EXPECT_THROW(parse(with_header("21.82,abc,7.04,2496,206.84,0.57,2025,x\n")), ParseError);
  EXPECT_THROW(parse(with_header("21.82,3.6,7.04,2496,206.84,1.2,2025,x\n")), ParseError);
  EXPECT_THROW(parse(with_header("21.82,3.6,7.04,2496,-1,0.1,2025,x\n")), ParseError);
}

TEST(LoadCsv, HeaderMismatchIsSchemaError) {
  EXPECT_THROW(parse("dhe,length,pressure,G,dh,x,q,source\n"), SchemaError);
  EXPECT_THROW(parse(""), SchemaError);
}

TEST(LoadCsv, MissingFileIsIoError) {
  EXPECT_THROW(load_csv("/nonexistent/chf.csv"), IoError);
}

TEST(WriteCsv, RoundTripsExactly) {
  const auto records = synth_generate(3, 50);
  std::ostringstream out;
  write_csv(out, records);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].op.d_he, records[i].op.d_he);
    EXPECT_EQ(back[i].op.length, records[i].op.length);
    EXPECT_EQ(back[i].q_cr, records[i].q_cr);
    EXPECT_EQ(back[i].x_e_cr, records[i].x_e_cr);
  }
}

ChfRecord make_record(double dhe_mm, double l, double p, double g, double dh,
                      double q) {
  return {{dhe_mm / 1000.0, l, p, g, dh}, q, std::nullopt, "t"};
}

TEST(Envelope, AllDataMaximaAndMinimaAreInside) {
  const std::vector<ChfRecord> rows = {
      make_record(96.30, 3.60, 15.55, 5913, 1163.03, 6000),
      make_record(11.30, 0.74, 4.13, 249, 6.98, 323)};
  EXPECT_TRUE(validate_envelope(rows).empty());
}

TEST(Envelope, FlagsHighPressure) {
  const std::vector<ChfRecord> rows = {make_record(20, 2, 20.0, 1000, 100, 1000)};
  const EnvelopeReport rep = validate_envelope(rows);
  ASSERT_EQ(rep.flags.size(), 1u);
  EXPECT_EQ(rep.flags[0].field, EnvelopeField::kPressure);
  EXPECT_EQ(rep.flags[0].index, 0u);
  EXPECT_EQ(rep.flags[0].value, 20.0);
}

TEST(Envelope, EmptyInput) {
  const EnvelopeReport rep = validate_envelope({});
  EXPECT_TRUE(rep.empty());
  EXPECT_EQ(rep.n_records, 0u);
}

TEST(Split, FiveHundredSeventySevenRows) {
  const auto records = synth_generate(1, 577);
  const SplitDataset s = split(records, 42);
  EXPECT_EQ(s.train.size(), 519u);
  EXPECT_EQ(s.validation.size(), 29u);
  EXPECT_EQ(s.test.size(), 29u);
}

TEST(Split, ExactFractions) {
  const auto records = synth_generate(1, 100);
  const SplitDataset s = split(records, 5);
  EXPECT_EQ(s.train.size(), 90u);
  EXPECT_EQ(s.validation.size(), 5u);
  EXPECT_EQ(s.test.size(), 5u);
}

TEST(Split, HoldoutRoundsHalfUp) {
  EXPECT_EQ(holdout_size(577), 29u);  // 28.85
  EXPECT_EQ(holdout_size(30), 2u);    // 1.5
  EXPECT_EQ(holdout_size(29), 1u);    // 1.45
  EXPECT_EQ(holdout_size(20), 1u);
}

TEST(Split, DeterministicForSeed) {
  const auto records = synth_generate(1, 200);
  const SplitDataset a = split(records, 77);
  const SplitDataset b = split(records, 77);
  EXPECT_EQ(a.train_index, b.train_index);
  EXPECT_EQ(a.validation_index, b.validation_index);
  EXPECT_EQ(a.test_index, b.test_index);
  const SplitDataset c = split(records, 78);
  EXPECT_NE(a.test_index, c.test_index);
}

TEST(Split, DisjointAndExhaustiveForAnySize) {
  for (std::size_t n : {20u, 21u, 39u, 100u, 577u, 1000u}) {
    const auto records = synth_generate(n, n);
    for (std::uint64_t seed : {0u, 1u, 12345u}) {
      const SplitDataset s = split(records, seed);
      std::multiset<std::size_t> all;
      all.insert(s.train_index.begin(), s.train_index.end());
      all.insert(s.validation_index.begin(), s.validation_index.end());
      all.insert(s.test_index.begin(), s.test_index.end());
      ASSERT_EQ(all.size(), n);
      std::size_t expect = 0;
      for (std::size_t i : all) EXPECT_EQ(i, expect++);
      EXPECT_EQ(s.test.size(), holdout_size(n));
      for (std::size_t k = 0; k < s.test.size(); ++k) {
        EXPECT_EQ(s.test[k].q_cr, records[s.test_index[k]].q_cr);
      }
    }
  }
}

TEST(Split, TooFewRecords) {
  const auto records = synth_generate(1, 19);
  EXPECT_THROW(split(records, 0), TooFewRecords);
}

std::vector<Features> features(std::span<const ChfRecord> rows) {
  std::vector<Features> out;
  for (const ChfRecord& r : rows) out.push_back(features_of(r.op));
  return out;
}

std::vector<double> chf(std::span<const ChfRecord> rows) {
  std::vector<double> out;
  for (const ChfRecord& r : rows) out.push_back(r.q_cr);
  return out;
}

TEST(Standardizer, ZeroMeanUnitStdOnTraining) {
  const auto records = synth_generate(8, 300);
  const auto x = features(records);
  const auto y = chf(records);
  const StandardizationStats s = fit_standardizer(x, y);
  Features mean{}, sq{};
  for (const Features& f : x) {
    const Features z = s.apply(f);
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      mean[j] += z[j] / static_cast<double>(x.size());
      sq[j] += z[j] * z[j] / static_cast<double>(x.size());
    }
  }
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    EXPECT_NEAR(mean[j], 0.0, 1e-10);
    EXPECT_NEAR(std::sqrt(sq[j] - mean[j] * mean[j]), 1.0, 1e-10);
  }
  double t_mean = 0.0;
  for (double v : y) t_mean += s.apply_target(v) / static_cast<double>(y.size());
  EXPECT_NEAR(t_mean, 0.0, 1e-10);
}

TEST(Standardizer, InvertUndoesApply) {
  const auto records = synth_generate(8, 100);
  const auto x = features(records);
  const StandardizationStats s = fit_standardizer(x, chf(records));
  for (const Features& f : x) {
    const Features back = s.invert(s.apply(f));
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      EXPECT_NEAR(back[j], f[j], 1e-12 * std::max(1.0, std::abs(f[j])));
    }
  }
  for (double v : chf(records)) {
    EXPECT_NEAR(s.invert_target(s.apply_target(v)), v, 1e-12 * v);
  }
}

TEST(Standardizer, StatsComeFromTrainingPartitionOnly) {
  const auto records = synth_generate(4, 200);
  const SplitDataset sp = split(records, 9);
  const StandardizationStats on_train =
      fit_standardizer(features(sp.train), chf(sp.train));
  const StandardizationStats on_all = fit_standardizer(features(records), chf(records));
  // Recomputed on train alone gives identical numbers; including held-out
  // rows would not.
  const StandardizationStats again =
      fit_standardizer(features(sp.train), chf(sp.train));
  EXPECT_EQ(on_train.feature_mean, again.feature_mean);
  EXPECT_EQ(on_train.feature_std, again.feature_std);
  EXPECT_NE(on_train.feature_mean, on_all.feature_mean);
}

TEST(Standardizer, ConstantFeatureIsDegenerate) {
  auto records = synth_generate(4, 10);
  for (ChfRecord& r : records) r.op.pressure = 7.0;
  EXPECT_THROW(fit_standardizer(features(records), chf(records)), DegenerateFeature);
  const std::vector<Features> one = {features_of(records[0].op)};
  const std::vector<double> y = {1.0};
  EXPECT_THROW(fit_standardizer(one, y), DegenerateFeature);
}

TEST(Residuals, BasePlusResidualIsMeasured) {
  const auto records = synth_generate(6, 60);
  for (CorrelationId id : kAllCorrelations) {
    const auto res = compute_residuals(records, id);
    ASSERT_EQ(res.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      const double base = heat_balance_chf(id, records[i].op);
      EXPECT_EQ(base + res[i].residual, records[i].q_cr);
      EXPECT_EQ(res[i].base, id);
    }
  }
}

TEST(Residuals, ZeroWhereBaseIsExact) {
  SynthOptions exact;
  exact.noise_sigma = 0.0;
  exact.bias_scale = 0.0;
  const auto records = synth_generate(2, 20, exact);
  for (const ResidualRecord& r : compute_residuals(records, CorrelationId::kBowring)) {
    EXPECT_EQ(r.residual, 0.0);
  }
}

TEST(Residuals, GoldenBowringResidual) {
  // q_cr = 2500 against the Bowring value 2285.5300797321265 kW/m^2.
  const std::vector<ChfRecord> rows = {make_record(15.2, 2.13, 6.89, 2000, 300, 2500)};
  const auto res = compute_residuals(rows, CorrelationId::kBowring);
  EXPECT_NEAR(res[0].residual, 2500.0 - 2285.5300797321265, 1e-9);
}

TEST(Residuals, ErrorsCarryRecordIndex) {
  std::vector<ChfRecord> rows = {make_record(15.2, 2.13, 6.89, 2000, 300, 2500),
                                 make_record(15.2, 2.13, 30.0, 2000, 300, 2500)};
  try {
    compute_residuals(rows, CorrelationId::kKatto);
    FAIL() << "expected PressureOutOfRange";
  } catch (const PressureOutOfRange& e) {
    EXPECT_NE(std::string(e.what()).find("record 1"), std::string::npos);
  }
}

TEST(Synth, DeterministicForSeed) {
  std::ostringstream a, b;
  write_csv(a, synth_generate(99, 64));
  write_csv(b, synth_generate(99, 64));
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream c;
  write_csv(c, synth_generate(100, 64));
  EXPECT_NE(a.str(), c.str());
}

TEST(Synth, FeaturesInsideEnvelope) {
  const auto records = synth_generate(5, 2000);
  EXPECT_EQ(validate_envelope(records).feature_flag_count(), 0u);
  for (const ChfRecord& r : records) {
    EXPECT_GT(r.q_cr, 0.0);
    if (r.x_e_cr) {
      EXPECT_GE(*r.x_e_cr, -1.0);
      EXPECT_LT(*r.x_e_cr, 1.0);
    }
  }
}

TEST(Synth, NoNoiseNoBiasReproducesBowring) {
  SynthOptions exact;
  exact.noise_sigma = 0.0;
  exact.bias_scale = 0.0;
  for (const ChfRecord& r : synth_generate(12, 100, exact)) {
    EXPECT_EQ(r.q_cr, bowring_inlet(r.op));
  }
}

TEST(Synth, BiasStaysInDocumentedRange) {
  for (const ChfRecord& r : synth_generate(12, 2000)) {
    const double b = synth_bias(r.op, kAnnulusEnvelope);
    EXPECT_GE(b, 0.20);
    EXPECT_LE(b, 0.50);
  }
}

TEST(Fingerprint, StableAndSensitive) {
  const auto records = synth_generate(1, 30);
  EXPECT_EQ(fingerprint(records), fingerprint(synth_generate(1, 30)));
  auto changed = records;
  changed[3].q_cr += 1e-9;
  EXPECT_NE(fingerprint(records), fingerprint(changed));
  EXPECT_EQ(fingerprint(records).size(), 16u);
}

}  // namespace
}  // namespace chfkit
