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

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "chfkit/error.h"
#include "chfkit/rng.h"

namespace chfkit {
namespace {

constexpr std::array<std::string_view, 8> kColumns = {
    "dhe_mm",          "length_m", "pressure_mpa", "mass_flux_kg_m2_s",
    "dh_sub_in_kj_kg", "x_e_cr",   "q_cr_kw_m2",   "source"};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void parse_fail(std::string_view origin, std::size_t row,
                             std::string_view column, std::string_view what) {
  std::ostringstream msg;
  msg << origin << ": row " << row << ", column " << column << ": " << what;
  throw ParseError(msg.str());
}

double parse_number(std::string_view text, std::string_view origin,
                    std::size_t row, std::string_view column) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    parse_fail(origin, row, column,
               "expected a number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) parse_fail(origin, row, column, "non-finite value");
  return value;
}

void append_number(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

double unit_interval(double v, const double (&range)[2]) {
  return (v - range[0]) / (range[1] - range[0]);
}

template <typename E>
[[noreturn]] void rethrow_at(const E& e, std::size_t index) {
  throw E("record " + std::to_string(index) + ": " + e.what());
}

}  // namespace

std::vector<ChfRecord> parse_csv(std::istream& in, std::string_view origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError(std::string(origin) + ": missing header");
  }
  if (line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0) {
    line.erase(0, 3);
  }
  if (trim(line) != kCsvHeader) {
    throw SchemaError(std::string(origin) + ": header mismatch; expected '" +
                      std::string(kCsvHeader) + "'");
  }

  std::vector<ChfRecord> records;
  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != kColumns.size()) {
      std::ostringstream msg;
      msg << "expected " << kColumns.size() << " fields, got " << fields.size();
      parse_fail(origin, row, "*", msg.str());
    }
    ChfRecord r;
    r.op.d_he = parse_number(fields[0], origin, row, kColumns[0]) / 1000.0;
    r.op.length = parse_number(fields[1], origin, row, kColumns[1]);
    r.op.pressure = parse_number(fields[2], origin, row, kColumns[2]);
    r.op.mass_flux = parse_number(fields[3], origin, row, kColumns[3]);
    r.op.dh_sub_in = parse_number(fields[4], origin, row, kColumns[4]);
    if (!trim(fields[5]).empty()) {
      r.x_e_cr = parse_number(fields[5], origin, row, kColumns[5]);
      if (!(*r.x_e_cr >= -1.0 && *r.x_e_cr < 1.0)) {
        parse_fail(origin, row, kColumns[5], "quality outside [-1, 1)");
      }
    }
    r.q_cr = parse_number(fields[6], origin, row, kColumns[6]);
    r.source = std::string(trim(fields[7]));

    if (!(r.q_cr > 0.0)) parse_fail(origin, row, kColumns[6], "must be > 0");
    const double positives[] = {r.op.d_he, r.op.length, r.op.pressure,
                                r.op.mass_flux};
    for (std::size_t c = 0; c < 4; ++c) {
      if (!(positives[c] > 0.0)) parse_fail(origin, row, kColumns[c], "must be > 0");
    }
    if (r.op.dh_sub_in < 0.0) parse_fail(origin, row, kColumns[4], "must be >= 0");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ChfRecord> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in, path.string());
}

void write_csv(std::ostream& out, std::span<const ChfRecord> records) {
  std::string text(kCsvHeader);
  text += '\n';
  for (const ChfRecord& r : records) {
    append_number(text, r.op.d_he * 1000.0);
    text += ',';
    append_number(text, r.op.length);
    text += ',';
    append_number(text, r.op.pressure);
    text += ',';
    append_number(text, r.op.mass_flux);
    text += ',';
    append_number(text, r.op.dh_sub_in);
    text += ',';
    if (r.x_e_cr) append_number(text, *r.x_e_cr);
    text += ',';
    append_number(text, r.q_cr);
    text += ',';
    text += r.source;
    text += '\n';
  }
  out << text;
}

void save_csv(const std::filesystem::path& path,
              std::span<const ChfRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, records);
  if (!out) throw IoError("write failed: " + path.string());
}

std::string_view to_string(EnvelopeField field) {
  switch (field) {
    case EnvelopeField::kDhe:
      return "dhe_mm";
    case EnvelopeField::kLength:
      return "length_m";
    case EnvelopeField::kPressure:
      return "pressure_mpa";
    case EnvelopeField::kMassFlux:
      return "mass_flux_kg_m2_s";
    case EnvelopeField::kDhSubIn:
      return "dh_sub_in_kj_kg";
    case EnvelopeField::kQcr:
      return "q_cr_kw_m2";
  }
  return "unknown";
}

std::size_t EnvelopeReport::feature_flag_count() const {
  std::size_t n = 0;
  for (const EnvelopeFlag& f : flags) n += f.field != EnvelopeField::kQcr;
  return n;
}

EnvelopeReport validate_envelope(std::span<const ChfRecord> records,
                                 const Envelope& env) {
  EnvelopeReport report;
  report.n_records = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ChfRecord& r = records[i];
    auto check = [&](EnvelopeField field, double v, const double (&range)[2]) {
      if (!(v >= range[0] && v <= range[1])) {
        report.flags.push_back({i, field, v});
      }
    };
    check(EnvelopeField::kDhe, r.op.d_he * 1000.0, env.d_he_mm);
    check(EnvelopeField::kLength, r.op.length, env.length_m);
    check(EnvelopeField::kPressure, r.op.pressure, env.pressure_mpa);
    check(EnvelopeField::kMassFlux, r.op.mass_flux, env.mass_flux);
    check(EnvelopeField::kDhSubIn, r.op.dh_sub_in, env.dh_sub_in);
    check(EnvelopeField::kQcr, r.q_cr, env.q_cr);
  }
  return report;
}

std::size_t holdout_size(std::size_t n) { return (5 * n + 50) / 100; }

SplitDataset split_from_indices(std::span<const ChfRecord> records,
                                std::vector<std::size_t> train,
                                std::vector<std::size_t> validation,
                                std::vector<std::size_t> test,
                                std::uint64_t seed) {
  std::vector<bool> seen(records.size(), false);
  auto gather = [&](const std::vector<std::size_t>& idx) {
    std::vector<ChfRecord> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) {
      if (i >= records.size()) {
        throw InputError("split index " + std::to_string(i) +
                         " out of range for " + std::to_string(records.size()) +
                         " records");
      }
      if (seen[i]) {
        throw InputError("split index " + std::to_string(i) + " repeated");
      }
      seen[i] = true;
      out.push_back(records[i]);
    }
    return out;
  };
  SplitDataset s;
  s.train = gather(train);
  s.validation = gather(validation);
  s.test = gather(test);
  s.train_index = std::move(train);
  s.validation_index = std::move(validation);
  s.test_index = std::move(test);
  s.seed = seed;
  return s;
}

SplitDataset split(std::span<const ChfRecord> records, std::uint64_t seed) {
  const std::size_t n = records.size();
  if (n < kMinSplitRecords) {
    throw TooFewRecords("split needs at least " +
                        std::to_string(kMinSplitRecords) + " records, got " +
                        std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const std::size_t n_hold = holdout_size(n);
  const std::size_t n_train = n - 2 * n_hold;
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> val(order.begin() + n_train,
                               order.begin() + n_train + n_hold);
  std::vector<std::size_t> test(order.begin() + n_train + n_hold, order.end());
  return split_from_indices(records, std::move(train), std::move(val),
                            std::move(test), seed);
}

Features features_of(const OperatingPoint& op) {
  return {op.d_he, op.length, op.pressure, op.mass_flux, op.dh_sub_in};
}

OperatingPoint operating_point_of(const Features& f) {
  return {.d_he = f[0],
          .length = f[1],
          .pressure = f[2],
          .mass_flux = f[3],
          .dh_sub_in = f[4]};
}

Features StandardizationStats::apply(const Features& x) const {
  Features z;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    z[j] = (x[j] - feature_mean[j]) / feature_std[j];
  }
  return z;
}

Features StandardizationStats::invert(const Features& z) const {
  Features x;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    x[j] = z[j] * feature_std[j] + feature_mean[j];
  }
  return x;
}

double StandardizationStats::apply_target(double y) const {
  return (y - target_mean) / target_std;
}

double StandardizationStats::invert_target(double z) const {
  return z * target_std + target_mean;
}

namespace {

struct MeanStd {
  double mean;
  double std;
};

template <typename Get>
MeanStd population_moments(std::size_t n, Get get) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += get(i);
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = get(i) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace

StandardizationStats fit_standardizer(std::span<const Features> x,
                                      std::span<const double> y) {
  if (x.size() < 2 || x.size() != y.size()) {
    throw DegenerateFeature(
        "standardizer needs at least two rows with matching targets");
  }
  StandardizationStats s;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    const MeanStd m =
        population_moments(x.size(), [&](std::size_t i) { return x[i][j]; });
    if (!(m.std > 0.0)) {
      throw DegenerateFeature("feature " + std::to_string(j) +
                              " is constant over the training rows");
    }
    s.feature_mean[j] = m.mean;
    s.feature_std[j] = m.std;
  }
  const MeanStd t = population_moments(y.size(), [&](std::size_t i) { return y[i]; });
  if (!(t.std > 0.0)) {
    throw DegenerateFeature("target is constant over the training rows");
  }
  s.target_mean = t.mean;
  s.target_std = t.std;
  return s;
}

std::vector<ResidualRecord> compute_residuals(
    std::span<const ChfRecord> records, CorrelationId corr) {
  std::vector<ResidualRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    double base = 0.0;
    try {
      base = heat_balance_chf(corr, records[i].op);
    } catch (const PressureOutOfRange& e) {
      rethrow_at(e, i);
    } catch (const NoRoot& e) {
      rethrow_at(e, i);
    } catch (const NoConvergence& e) {
      rethrow_at(e, i);
    } catch (const DomainError& e) {
      rethrow_at(e, i);
    }
    out.push_back({records[i].op, records[i].q_cr - base, corr});
  }
  return out;
}

double synth_bias(const OperatingPoint& op, const Envelope& env) {
  const double s_g = unit_interval(op.mass_flux, env.mass_flux);
  const double s_p = unit_interval(op.pressure, env.pressure_mpa);
  const double s_l = unit_interval(op.length, env.length_m);
  return 0.25 + 0.15 * s_g + 0.10 * std::sin(std::numbers::pi * s_p) -
         0.05 * s_l;
}

std::vector<ChfRecord> synth_generate(std::uint64_t seed, std::size_t n,
                                      const SynthOptions& opts) {
  const Envelope& env = opts.envelope;
  Rng rng(seed);
  std::vector<ChfRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ChfRecord r;
    r.op.d_he = rng.uniform(env.d_he_mm[0], env.d_he_mm[1]) / 1000.0;
    r.op.length = rng.uniform(env.length_m[0], env.length_m[1]);
    r.op.pressure = rng.uniform(env.pressure_mpa[0], env.pressure_mpa[1]);
    r.op.mass_flux = rng.uniform(env.mass_flux[0], env.mass_flux[1]);
    r.op.dh_sub_in = rng.uniform(env.dh_sub_in[0], env.dh_sub_in[1]);
    // Always draw, so the stream does not depend on the noise setting.
    double noise = opts.noise_sigma * rng.normal();
    if (noise <= -0.9) noise = -0.9;
    const double biased =
        bowring_inlet(r.op) * (1.0 + opts.bias_scale * synth_bias(r.op, env));
    r.q_cr = opts.noise_sigma == 0.0 ? biased : biased * (1.0 + noise);
    const double x = exit_quality(r.q_cr, r.op, sat_props(r.op.pressure));
    if (x >= -1.0 && x < 1.0) r.x_e_cr = x;
    r.source = "synthetic";
    out.push_back(std::move(r));
  }
  return out;
}

std::string fingerprint(std::span<const ChfRecord> records) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  auto mix = [&](double v) { mix_bytes(&v, sizeof v); };
  for (const ChfRecord& r : records) {
    mix(r.op.d_he);
    mix(r.op.length);
    mix(r.op.pressure);
    mix(r.op.mass_flux);
    mix(r.op.dh_sub_in);
    mix(r.q_cr);
    mix(r.x_e_cr.value_or(std::nan("")));
    mix_bytes(r.source.data(), r.source.size());
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chfkit
