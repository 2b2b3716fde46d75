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

#ifndef CHFKIT_HYBRID_H_
#define CHFKIT_HYBRID_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chfkit/correlations.h"
#include "chfkit/dataset.h"
#include "chfkit/net.h"

namespace chfkit {

enum class ModelKind { kPureMl, kHybridBiasi, kHybridBowring, kHybridKatto };

inline constexpr std::array<ModelKind, 4> kAllModelKinds = {
    ModelKind::kPureMl, ModelKind::kHybridBiasi, ModelKind::kHybridBowring,
    ModelKind::kHybridKatto};

/// "pure", "hybrid-biasi", "hybrid-bowring", "hybrid-katto".
std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// The correlation a hybrid corrects; nullopt for the pure model.
std::optional<CorrelationId> base_correlation(ModelKind kind);

struct BundleMetadata {
  std::uint64_t seed = 0;
  TrainConfig train_config;
  std::string data_fingerprint;
};

/// A trained, deployable model. The network maps standardized features to a
/// standardized target: CHF for the pure model, measured-minus-base residual
/// for hybrids.
struct ModelBundle {
  ModelKind kind = ModelKind::kPureMl;
  Network network;
  StandardizationStats stats;
  BundleMetadata metadata;
};

using BaseModel = std::function<double(CorrelationId, const OperatingPoint&)>;

/// heat_balance_chf with default options.
double default_base_model(CorrelationId corr, const OperatingPoint& op);

/// De-standardized network output for `op`.
double network_term(const ModelBundle& bundle, const OperatingPoint& op);

/// CHF in kW/m^2. Pure: the network term. Hybrid: base(corr, op) plus the
/// network term. Throws NonFinitePrediction for non-finite or nonpositive
/// results.
double predict(const ModelBundle& bundle, const OperatingPoint& op,
               const BaseModel& base = default_base_model);

inline constexpr int kBundleFormatVersion = 1;

/// Writes the versioned text container described in docs/bundle-format.md.
void write_bundle(std::ostream& out, const ModelBundle& bundle);
/// Throws FormatError naming the offending field, VersionError on a version
/// other than kBundleFormatVersion.
ModelBundle read_bundle(std::istream& in);

void save(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load(const std::filesystem::path& path);

// Regression targets for `kind`: the residual q_cr - base for hybrids and
// q_cr itself for the pure network.
std::vector<double> training_targets(std::span<const ChfRecord> records,
                                     ModelKind kind);

// Standardized design matrix (features as rows, samples as columns) and
// standardized targets.
TrainSet make_train_set(std::span<const ChfRecord> records,
                        std::span<const double> targets,
                        const StandardizationStats& stats);

/// Everything produced by one training run.
struct FitResult {
  ModelBundle bundle;
  TrainHistory history;
  SplitDataset split;
};

/// split(seed) -> residuals (hybrids) -> standardize on train -> init(seed)
/// -> train. cfg.seed is overwritten with `seed`.
FitResult fit_model(std::span<const ChfRecord> records, ModelKind kind,
                    std::uint64_t seed, TrainConfig cfg = {},
                    const Architecture& arch = {});

/// Same, on a fixed partition.
FitResult fit_model(const SplitDataset& split, ModelKind kind,
                    std::uint64_t seed, TrainConfig cfg,
                    const Architecture& arch, std::string data_fingerprint);

}  // namespace chfkit

#endif  // CHFKIT_HYBRID_H_
