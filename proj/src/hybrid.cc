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

#include "chfkit/hybrid.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "chfkit/error.h"

namespace chfkit {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPureMl:
      return "pure";
    case ModelKind::kHybridBiasi:
      return "hybrid-biasi";
    case ModelKind::kHybridBowring:
      return "hybrid-bowring";
    case ModelKind::kHybridKatto:
      return "hybrid-katto";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (ModelKind k : kAllModelKinds) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<CorrelationId> base_correlation(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPureMl:
      return std::nullopt;
    case ModelKind::kHybridBiasi:
      return CorrelationId::kBiasi;
    case ModelKind::kHybridBowring:
      return CorrelationId::kBowring;
    case ModelKind::kHybridKatto:
      return CorrelationId::kKatto;
  }
  return std::nullopt;
}

double default_base_model(CorrelationId corr, const OperatingPoint& op) {
  return heat_balance_chf(corr, op);
}

double network_term(const ModelBundle& bundle, const OperatingPoint& op) {
  const Features z = bundle.stats.apply(features_of(op));
  return bundle.stats.invert_target(forward(bundle.network, z));
}

double predict(const ModelBundle& bundle, const OperatingPoint& op,
               const BaseModel& base) {
  double q = network_term(bundle, op);
  if (const auto corr = base_correlation(bundle.kind)) q += base(*corr, op);
  if (!std::isfinite(q) || q <= 0.0) {
    std::ostringstream msg;
    msg << to_string(bundle.kind) << ": prediction " << q
        << " kW/m^2 is not a positive finite CHF";
    throw NonFinitePrediction(msg.str());
  }
  return q;
}

// --- bundle text format ----------------------------------------------------

namespace {

constexpr std::string_view kMagic = "chfkit-bundle";

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void put_values(std::ostream& out, std::string_view key,
                std::span<const double> values) {
  out << key;
  for (double v : values) out << ' ' << hex(v);
  out << '\n';
}

class BundleReader {
 public:
  explicit BundleReader(std::istream& in) : in_(in) {}

  // Next non-empty line split into tokens; the first must equal `key`.
  std::vector<std::string> expect(std::string_view key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(std::move(t));
      if (tokens.empty()) continue;
      if (tokens[0] != key) {
        fail(key, "expected field '" + std::string(key) + "', found '" +
                      tokens[0] + "'");
      }
      tokens.erase(tokens.begin());
      return tokens;
    }
    fail(key, "unexpected end of file");
  }

  std::vector<double> numbers(std::string_view key, std::size_t count) {
    const auto tokens = expect(key);
    if (tokens.size() != count) {
      fail(key, "expected " + std::to_string(count) + " values, got " +
                    std::to_string(tokens.size()));
    }
    std::vector<double> out;
    out.reserve(count);
    for (const std::string& t : tokens) out.push_back(to_double(key, t));
    return out;
  }

  double number(std::string_view key) { return numbers(key, 1)[0]; }

  long long integer(std::string_view key) {
    const auto tokens = expect(key);
    if (tokens.size() != 1) fail(key, "expected one integer");
    return to_integer(key, tokens[0]);
  }

  std::string word(std::string_view key) {
    const auto tokens = expect(key);
    if (tokens.size() != 1) fail(key, "expected one value");
    return tokens[0];
  }

  double to_double(std::string_view key, const std::string& t) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
      fail(key, "bad number '" + t + "'");
    }
    return v;
  }

  long long to_integer(std::string_view key, const std::string& t) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
      fail(key, "bad integer '" + t + "'");
    }
    return v;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    throw FormatError("bundle line " + std::to_string(line_no_) + ", field '" +
                      std::string(key) + "': " + what);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

void write_bundle(std::ostream& out, const ModelBundle& b) {
  const Network& net = b.network;
  out << kMagic << ' ' << kBundleFormatVersion << '\n';
  out << "kind " << to_string(b.kind) << '\n';
  out << "activation " << to_string(net.arch.activation) << '\n';
  out << "dims " << net.arch.input_dim;
  for (int w : net.arch.hidden) out << ' ' << w;
  out << ' ' << net.arch.output_dim << '\n';
  put_values(out, "feature_mean", b.stats.feature_mean);
  put_values(out, "feature_std", b.stats.feature_std);
  out << "target_mean " << hex(b.stats.target_mean) << '\n';
  out << "target_std " << hex(b.stats.target_std) << '\n';

  const TrainConfig& c = b.metadata.train_config;
  out << "seed " << b.metadata.seed << '\n';
  out << "fingerprint "
      << (b.metadata.data_fingerprint.empty() ? "-" : b.metadata.data_fingerprint)
      << '\n';
  out << "train.max_epochs " << c.max_epochs << '\n';
  out << "train.patience " << c.patience << '\n';
  out << "train.lr0 " << hex(c.lr0) << '\n';
  out << "train.decay " << hex(c.decay) << '\n';
  out << "train.batch_size " << c.batch_size << '\n';
  out << "train.seed " << c.seed << '\n';
  out << "train.min_delta " << hex(c.min_delta) << '\n';
  out << "train.beta1 " << hex(c.beta1) << '\n';
  out << "train.beta2 " << hex(c.beta2) << '\n';
  out << "train.epsilon " << hex(c.epsilon) << '\n';

  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const Layer& l = net.layers[k];
    out << "layer " << k << ' ' << l.weight.rows() << ' ' << l.weight.cols()
        << '\n';
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      out << 'w';
      for (Eigen::Index c2 = 0; c2 < l.weight.cols(); ++c2) {
        out << ' ' << hex(l.weight(r, c2));
      }
      out << '\n';
    }
    out << 'b';
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out << ' ' << hex(l.bias(r));
    out << '\n';
  }
  out << "end\n";
}

ModelBundle read_bundle(std::istream& in) {
  BundleReader rd(in);
  ModelBundle b;

  const auto head = rd.expect(kMagic);
  if (head.size() != 1) rd.fail(kMagic, "expected a version number");
  const long long version = rd.to_integer(kMagic, head[0]);
  if (version != kBundleFormatVersion) {
    throw VersionError("bundle format version " + std::to_string(version) +
                       " is not supported (expected " +
                       std::to_string(kBundleFormatVersion) + ")");
  }

  const std::string kind = rd.word("kind");
  const auto parsed_kind = parse_model_kind(kind);
  if (!parsed_kind) rd.fail("kind", "unknown model kind '" + kind + "'");
  b.kind = *parsed_kind;

  const std::string act = rd.word("activation");
  if (act != to_string(Activation::kRelu)) {
    rd.fail("activation", "unknown activation '" + act + "'");
  }

  const auto dims_tokens = rd.expect("dims");
  std::vector<int> dims;
  for (const std::string& t : dims_tokens) {
    const long long d = rd.to_integer("dims", t);
    if (d < 1 || d > 1'000'000) rd.fail("dims", "width out of range");
    dims.push_back(static_cast<int>(d));
  }
  if (dims.size() != kHiddenLayerCount + 2) {
    rd.fail("dims", "expected 9 layer widths, got " + std::to_string(dims.size()));
  }
  if (dims.front() != static_cast<int>(kFeatureCount) || dims.back() != 1) {
    rd.fail("dims", "network must map 5 features to 1 output");
  }
  Architecture arch;
  arch.input_dim = dims.front();
  arch.output_dim = dims.back();
  arch.hidden.assign(dims.begin() + 1, dims.end() - 1);

  const auto mean = rd.numbers("feature_mean", kFeatureCount);
  const auto std_dev = rd.numbers("feature_std", kFeatureCount);
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    b.stats.feature_mean[j] = mean[j];
    if (!(std_dev[j] > 0.0)) rd.fail("feature_std", "must be > 0");
    b.stats.feature_std[j] = std_dev[j];
  }
  b.stats.target_mean = rd.number("target_mean");
  b.stats.target_std = rd.number("target_std");
  if (!(b.stats.target_std > 0.0)) rd.fail("target_std", "must be > 0");

  b.metadata.seed = static_cast<std::uint64_t>(rd.to_integer("seed", rd.word("seed")));
  b.metadata.data_fingerprint = rd.word("fingerprint");
  if (b.metadata.data_fingerprint == "-") b.metadata.data_fingerprint.clear();
  TrainConfig& c = b.metadata.train_config;
  c.max_epochs = static_cast<int>(rd.integer("train.max_epochs"));
  c.patience = static_cast<int>(rd.integer("train.patience"));
  c.lr0 = rd.number("train.lr0");
  c.decay = rd.number("train.decay");
  c.batch_size = static_cast<int>(rd.integer("train.batch_size"));
  c.seed = static_cast<std::uint64_t>(rd.integer("train.seed"));
  c.min_delta = rd.number("train.min_delta");
  c.beta1 = rd.number("train.beta1");
  c.beta2 = rd.number("train.beta2");
  c.epsilon = rd.number("train.epsilon");

  b.network = zero_network(arch);
  for (std::size_t k = 0; k < b.network.layers.size(); ++k) {
    Layer& l = b.network.layers[k];
    const auto shape = rd.expect("layer");
    if (shape.size() != 3 ||
        rd.to_integer("layer", shape[0]) != static_cast<long long>(k) ||
        rd.to_integer("layer", shape[1]) != l.weight.rows() ||
        rd.to_integer("layer", shape[2]) != l.weight.cols()) {
      rd.fail("layer", "header does not match dims for layer " + std::to_string(k));
    }
    const auto cols = static_cast<std::size_t>(l.weight.cols());
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      const auto row = rd.numbers("w", cols);
      for (std::size_t c2 = 0; c2 < cols; ++c2) {
        l.weight(r, static_cast<Eigen::Index>(c2)) = row[c2];
      }
    }
    const auto bias = rd.numbers("b", static_cast<std::size_t>(l.bias.size()));
    for (std::size_t r = 0; r < bias.size(); ++r) {
      l.bias(static_cast<Eigen::Index>(r)) = bias[r];
    }
  }
  if (!rd.expect("end").empty()) rd.fail("end", "trailing tokens");
  return b;
}

void save(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_bundle(out, bundle);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

ModelBundle load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_bundle(in);
}

// --- training pipeline -----------------------------------------------------

std::vector<double> training_targets(std::span<const ChfRecord> records,
                                ModelKind kind) {
  std::vector<double> y;
  y.reserve(records.size());
  if (const auto corr = base_correlation(kind)) {
    for (const ResidualRecord& r : compute_residuals(records, *corr)) {
      y.push_back(r.residual);
    }
  } else {
    for (const ChfRecord& r : records) y.push_back(r.q_cr);
  }
  return y;
}

TrainSet make_train_set(std::span<const ChfRecord> records,
                        std::span<const double> targets,
                        const StandardizationStats& stats) {
  TrainSet s;
  const auto n = static_cast<Eigen::Index>(records.size());
  s.x.resize(static_cast<Eigen::Index>(kFeatureCount), n);
  s.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Features z = stats.apply(features_of(records[static_cast<std::size_t>(i)].op));
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      s.x(static_cast<Eigen::Index>(j), i) = z[j];
    }
    s.y(i) = stats.apply_target(targets[static_cast<std::size_t>(i)]);
  }
  return s;
}

FitResult fit_model(const SplitDataset& split, ModelKind kind,
                    std::uint64_t seed, TrainConfig cfg,
                    const Architecture& arch, std::string data_fingerprint) {
  cfg.seed = seed;
  const std::vector<double> y_train = training_targets(split.train, kind);
  const std::vector<double> y_val = training_targets(split.validation, kind);

  std::vector<Features> x_train;
  x_train.reserve(split.train.size());
  for (const ChfRecord& r : split.train) x_train.push_back(features_of(r.op));
  const StandardizationStats stats = fit_standardizer(x_train, y_train);

  const TrainSet train_set = make_train_set(split.train, y_train, stats);
  const TrainSet val_set = make_train_set(split.validation, y_val, stats);

  TrainResult trained = train(init_network(arch, seed), train_set, val_set, cfg);

  FitResult out;
  out.bundle.kind = kind;
  out.bundle.network = std::move(trained.net);
  out.bundle.stats = stats;
  out.bundle.metadata = {seed, cfg, std::move(data_fingerprint)};
  out.history = std::move(trained.history);
  out.split = split;
  return out;
}

FitResult fit_model(std::span<const ChfRecord> records, ModelKind kind,
                    std::uint64_t seed, TrainConfig cfg,
                    const Architecture& arch) {
  return fit_model(split(records, seed), kind, seed, cfg, arch,
                   fingerprint(records));
}

}  // namespace chfkit
