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

#ifndef CHFKIT_NET_H_
#define CHFKIT_NET_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace chfkit {

enum class Activation { kRelu };

std::string_view to_string(Activation a);

inline constexpr std::size_t kHiddenLayerCount = 7;

struct Architecture {
  int input_dim = 5;
  std::vector<int> hidden = std::vector<int>(kHiddenLayerCount, 64);
  int output_dim = 1;
  Activation activation = Activation::kRelu;

  /// Seven hidden layers of `width` units.
  static Architecture uniform(int width);
};

/// Throws std::invalid_argument if the architecture breaks its invariants.
void validate(const Architecture& arch);

/// y = W x + b. W is out x in.
struct Layer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

struct Network {
  Architecture arch;
  std::vector<Layer> layers;  // hidden layers followed by the output head

  std::size_t parameter_count() const;
};

/// Glorot-uniform weights, zero biases, drawn from Rng(seed) layer by layer
/// in row-major order.
Network init_network(const Architecture& arch, std::uint64_t seed);

/// Network of the given shape with every parameter zero.
Network zero_network(const Architecture& arch);

/// Parameters in layer order, each layer as weights (row-major) then bias.
std::vector<double> flatten_parameters(const Network& net);
void assign_parameters(Network& net, std::span<const double> params);

/// Scalar output for one standardized input.
double forward(const Network& net, std::span<const double> x);

/// Outputs for a batch stored column-wise (input_dim x n).
Eigen::RowVectorXd forward_batch(const Network& net, const Eigen::MatrixXd& x);

/// Gradients share the Layer layout of the network.
struct LossAndGrad {
  double loss = 0.0;
  std::vector<Layer> grad;
};

/// Mean squared error over the batch and its exact gradient.
LossAndGrad loss_and_grad(const Network& net, const Eigen::MatrixXd& x,
                          const Eigen::RowVectorXd& target);

double mse(const Network& net, const Eigen::MatrixXd& x,
           const Eigen::RowVectorXd& target);

/// Samples column-wise, one target per column.
struct TrainSet {
  Eigen::MatrixXd x;
  Eigen::RowVectorXd y;

  std::size_t size() const { return static_cast<std::size_t>(x.cols()); }
};

struct TrainConfig {
  int max_epochs = 500;
  int patience = 25;
  double lr0 = 1e-3;
  double decay = 0.96;
  int batch_size = 32;
  std::uint64_t seed = 0;      // mini-batch shuffling
  double min_delta = 1e-12;    // required drop below best validation loss
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Throws std::invalid_argument on an out-of-range field.
void validate(const TrainConfig& cfg);

/// Learning rate used during epoch index e (0-based): lr0 * decay^e.
double scheduled_lr(const TrainConfig& cfg, int epoch_index);

/// Per-epoch vectors are indexed from 0. stopped_epoch and best_epoch are
/// 1-based epoch numbers, so epoch number k used lr[k - 1].
struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::vector<double> lr;
  int stopped_epoch = 0;
  int best_epoch = 0;
};

struct TrainResult {
  Network net;  // parameters at best_epoch
  TrainHistory history;
};

/// Returns the validation loss of the network after epoch index `epoch`.
using Validator = std::function<double(const Network&, int epoch)>;

/// Adam with a per-epoch exponential learning-rate decay and early stopping
/// on the validator. Training ends after `patience` consecutive epochs without
/// a drop of at least min_delta below the best validation loss, or after
/// max_epochs. Throws NonFiniteLoss if a loss turns NaN or infinite.
TrainResult train(Network net, const TrainSet& train_set,
                  const Validator& validator, const TrainConfig& cfg);

/// Same, validating by MSE on `val_set`.
TrainResult train(Network net, const TrainSet& train_set,
                  const TrainSet& val_set, const TrainConfig& cfg);

}  // namespace chfkit

#endif  // CHFKIT_NET_H_
