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

#include "chfkit/net.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chfkit/error.h"
#include "chfkit/rng.h"

namespace chfkit {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
  }
  return "unknown";
}

Architecture Architecture::uniform(int width) {
  Architecture arch;
  arch.hidden.assign(kHiddenLayerCount, width);
  return arch;
}

void validate(const Architecture& arch) {
  if (arch.input_dim < 1 || arch.output_dim < 1) {
    throw std::invalid_argument("architecture: dimensions must be >= 1");
  }
  if (arch.hidden.size() != kHiddenLayerCount) {
    throw std::invalid_argument("architecture: expected 7 hidden layers, got " +
                                std::to_string(arch.hidden.size()));
  }
  for (int w : arch.hidden) {
    if (w < 1) throw std::invalid_argument("architecture: width must be >= 1");
  }
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) {
    n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  }
  return n;
}

namespace {

std::vector<int> layer_dims(const Architecture& arch) {
  std::vector<int> dims;
  dims.push_back(arch.input_dim);
  dims.insert(dims.end(), arch.hidden.begin(), arch.hidden.end());
  dims.push_back(arch.output_dim);
  return dims;
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd relu_mask(const Eigen::MatrixXd& z) {
  return (z.array() > 0.0).cast<double>().matrix();
}

// Keeps pre-activations (z) and activations (a) for backprop. a[0] is the
// input; z[k] and a[k + 1] belong to layer k.
struct Trace {
  std::vector<Eigen::MatrixXd> z;
  std::vector<Eigen::MatrixXd> a;
};

Trace run(const Network& net, const Eigen::MatrixXd& x) {
  Trace t;
  t.a.push_back(x);
  const std::size_t last = net.layers.size() - 1;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const Layer& l = net.layers[k];
    Eigen::MatrixXd z = l.weight * t.a.back();
    z.colwise() += l.bias;
    t.a.push_back(k == last ? z : relu(z));
    t.z.push_back(std::move(z));
  }
  return t;
}

struct AdamSlot {
  Eigen::MatrixXd m_w, v_w;
  Eigen::VectorXd m_b, v_b;
};

}  // namespace

Network init_network(const Architecture& arch, std::uint64_t seed) {
  validate(arch);
  Rng rng(seed);
  Network net;
  net.arch = arch;
  const std::vector<int> dims = layer_dims(arch);
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const int in = dims[k];
    const int out = dims[k + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    Layer l{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) l.weight(r, c) = rng.uniform(-limit, limit);
    }
    net.layers.push_back(std::move(l));
  }
  return net;
}

Network zero_network(const Architecture& arch) {
  validate(arch);
  Network net;
  net.arch = arch;
  const std::vector<int> dims = layer_dims(arch);
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    net.layers.push_back({Eigen::MatrixXd::Zero(dims[k + 1], dims[k]),
                          Eigen::VectorXd::Zero(dims[k + 1])});
  }
  return net;
}

std::vector<double> flatten_parameters(const Network& net) {
  std::vector<double> out;
  out.reserve(net.parameter_count());
  for (const Layer& l : net.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) {
        out.push_back(l.weight(r, c));
      }
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out.push_back(l.bias(r));
  }
  return out;
}

void assign_parameters(Network& net, std::span<const double> params) {
  if (params.size() != net.parameter_count()) {
    throw std::invalid_argument("assign_parameters: size mismatch");
  }
  std::size_t i = 0;
  for (Layer& l : net.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) {
        l.weight(r, c) = params[i++];
      }
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = params[i++];
  }
}

double forward(const Network& net, std::span<const double> x) {
  Eigen::MatrixXd col(static_cast<Eigen::Index>(x.size()), 1);
  for (std::size_t j = 0; j < x.size(); ++j) {
    col(static_cast<Eigen::Index>(j), 0) = x[j];
  }
  return forward_batch(net, col)(0);
}

Eigen::RowVectorXd forward_batch(const Network& net, const Eigen::MatrixXd& x) {
  if (x.rows() != net.arch.input_dim) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  Eigen::MatrixXd a = x;
  const std::size_t last = net.layers.size() - 1;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    Eigen::MatrixXd z = net.layers[k].weight * a;
    z.colwise() += net.layers[k].bias;
    a = k == last ? std::move(z) : relu(z);
  }
  return a.row(0);
}

double mse(const Network& net, const Eigen::MatrixXd& x,
           const Eigen::RowVectorXd& target) {
  const Eigen::RowVectorXd err = forward_batch(net, x) - target;
  return err.squaredNorm() / static_cast<double>(err.size());
}

LossAndGrad loss_and_grad(const Network& net, const Eigen::MatrixXd& x,
                          const Eigen::RowVectorXd& target) {
  if (x.cols() == 0 || x.cols() != target.size()) {
    throw std::invalid_argument("loss_and_grad: empty or mismatched batch");
  }
  const double n = static_cast<double>(x.cols());
  const Trace t = run(net, x);
  const Eigen::RowVectorXd err = t.a.back().row(0) - target;

  LossAndGrad out;
  out.loss = err.squaredNorm() / n;
  out.grad.resize(net.layers.size());

  Eigen::MatrixXd delta = (2.0 / n) * err;  // dL/dz for the linear head
  for (std::size_t k = net.layers.size(); k-- > 0;) {
    out.grad[k].weight = delta * t.a[k].transpose();
    out.grad[k].bias = delta.rowwise().sum();
    if (k > 0) {
      delta = (net.layers[k].weight.transpose() * delta)
                  .cwiseProduct(relu_mask(t.z[k - 1]));
    }
  }
  return out;
}

void validate(const TrainConfig& cfg) {
  if (cfg.max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (cfg.patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (!(cfg.decay > 0.0 && cfg.decay <= 1.0)) {
    throw std::invalid_argument("decay must lie in (0, 1]");
  }
  if (!(cfg.lr0 > 0.0)) throw std::invalid_argument("lr0 must be > 0");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
}

double scheduled_lr(const TrainConfig& cfg, int epoch_index) {
  return cfg.lr0 * std::pow(cfg.decay, epoch_index);
}

TrainResult train(Network net, const TrainSet& train_set,
                  const Validator& validator, const TrainConfig& cfg) {
  validate(cfg);
  const std::size_t n = train_set.size();
  if (n == 0) throw std::invalid_argument("train: empty training set");

  std::vector<AdamSlot> adam;
  for (const Layer& l : net.layers) {
    adam.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                    Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                    Eigen::VectorXd::Zero(l.bias.size()),
                    Eigen::VectorXd::Zero(l.bias.size())});
  }

  Rng rng(cfg.seed);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);

  TrainResult result{net, {}};
  TrainHistory& h = result.history;
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  long step = 0;

  for (int e = 0; e < cfg.max_epochs; ++e) {
    const double lr = scheduled_lr(cfg, e);
    rng.shuffle(std::span<Eigen::Index>(order));

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t count = std::min(batch, n - start);
      Eigen::MatrixXd xb(train_set.x.rows(), static_cast<Eigen::Index>(count));
      Eigen::RowVectorXd yb(static_cast<Eigen::Index>(count));
      for (std::size_t i = 0; i < count; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        xb.col(col) = train_set.x.col(order[start + i]);
        yb(col) = train_set.y(order[start + i]);
      }
      const LossAndGrad lg = loss_and_grad(net, xb, yb);
      if (!std::isfinite(lg.loss)) {
        throw NonFiniteLoss("non-finite training loss in epoch " +
                            std::to_string(e + 1));
      }
      loss_sum += lg.loss * static_cast<double>(count);

      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t k = 0; k < net.layers.size(); ++k) {
        AdamSlot& s = adam[k];
        const Layer& g = lg.grad[k];
        s.m_w = cfg.beta1 * s.m_w + (1.0 - cfg.beta1) * g.weight;
        s.v_w = cfg.beta2 * s.v_w + (1.0 - cfg.beta2) * g.weight.cwiseAbs2();
        s.m_b = cfg.beta1 * s.m_b + (1.0 - cfg.beta1) * g.bias;
        s.v_b = cfg.beta2 * s.v_b + (1.0 - cfg.beta2) * g.bias.cwiseAbs2();
        net.layers[k].weight.array() -=
            lr * (s.m_w.array() / c1) /
            ((s.v_w.array() / c2).sqrt() + cfg.epsilon);
        net.layers[k].bias.array() -=
            lr * (s.m_b.array() / c1) /
            ((s.v_b.array() / c2).sqrt() + cfg.epsilon);
      }
    }

    const double val = validator(net, e);
    if (!std::isfinite(val)) {
      throw NonFiniteLoss("non-finite validation loss in epoch " +
                          std::to_string(e + 1));
    }
    h.train_loss.push_back(loss_sum / static_cast<double>(n));
    h.val_loss.push_back(val);
    h.lr.push_back(lr);
    h.stopped_epoch = e + 1;

    if (val < best - cfg.min_delta) {
      best = val;
      h.best_epoch = e + 1;
      result.net = net;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

TrainResult train(Network net, const TrainSet& train_set,
                  const TrainSet& val_set, const TrainConfig& cfg) {
  if (val_set.size() == 0) {
    throw std::invalid_argument("train: empty validation set");
  }
  return train(
      std::move(net), train_set,
      [&val_set](const Network& current, int) {
        return mse(current, val_set.x, val_set.y);
      },
      cfg);
}

}  // namespace chfkit
