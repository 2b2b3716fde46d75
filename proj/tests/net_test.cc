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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <gtest/gtest.h>

#include "chfkit/dataset.h"
#include "chfkit/error.h"
#include "chfkit/hybrid.h"
#include "chfkit/rng.h"
#include "gradcheck.h"

namespace chfkit {
namespace {

constexpr double kPinnedBestValLoss = 0.047355544246925063;

Architecture small_arch(int width = 4) { return Architecture::uniform(width); }

TEST(Architecture, DefaultIsSevenBySixtyFour) {
  const Architecture a;
  EXPECT_EQ(a.input_dim, 5);
  EXPECT_EQ(a.output_dim, 1);
  ASSERT_EQ(a.hidden.size(), 7u);
  for (int w : a.hidden) EXPECT_EQ(w, 64);
  Architecture bad;
  bad.hidden.pop_back();
  EXPECT_THROW(validate(bad), std::invalid_argument);
  bad = Architecture{};
  bad.hidden[2] = 0;
  EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(Init, SeedDeterminesParameters) {
  const Network a = init_network(small_arch(), 1);
  const Network b = init_network(small_arch(), 1);
  const Network c = init_network(small_arch(), 2);
  EXPECT_EQ(flatten_parameters(a), flatten_parameters(b));
  EXPECT_NE(flatten_parameters(a), flatten_parameters(c));
}

TEST(Init, ShapesFollowArchitectureAndNoZeroWeightMatrix) {
  Architecture arch;
  arch.hidden = {3, 5, 7, 2, 4, 6, 8};
  const Network net = init_network(arch, 3);
  ASSERT_EQ(net.layers.size(), 8u);
  int in = 5;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const int out = k < 7 ? arch.hidden[k] : 1;
    EXPECT_EQ(net.layers[k].weight.rows(), out);
    EXPECT_EQ(net.layers[k].weight.cols(), in);
    EXPECT_EQ(net.layers[k].bias.size(), out);
    EXPECT_GT(net.layers[k].weight.cwiseAbs().maxCoeff(), 0.0);
    in = out;
  }
}

TEST(Forward, ZeroNetworkOutputsZero) {
  const Network net = zero_network(Architecture{});
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const double x[5] = {rng.normal(), rng.normal(), rng.normal(), rng.normal(),
                         rng.normal()};
    EXPECT_EQ(forward(net, x), 0.0);
  }
}

TEST(Forward, DeterministicBitForBit) {
  const Network net = init_network(Architecture{}, 9);
  const double x[5] = {0.3, -1.2, 0.7, 2.0, -0.4};
  const double a = forward(net, x);
  const double b = forward(net, x);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(Forward, HandComputedSingleUnitChain) {
  // 5 -> 1 -> 1 -> ... -> 1 with hand-set weights.
  //   layer 0: w = (0.5, -1, 0.25, 2, 0.1), b = 0.3
  //     x = (1, 0.5, -2, 0.25, 3): 0.5 - 0.5 - 0.5 + 0.5 + 0.3 + 0.3 = 0.6
  //   layers 1-6: a <- relu(1.5 a - 0.1):
  //     0.8, 1.1, 1.55, 2.225, 3.2375, 4.75625
  //   head: -2 * 4.75625 + 0.5 = -9.0125
  Network net = zero_network(Architecture::uniform(1));
  net.layers[0].weight << 0.5, -1.0, 0.25, 2.0, 0.1;
  net.layers[0].bias << 0.3;
  for (std::size_t k = 1; k < 7; ++k) {
    net.layers[k].weight << 1.5;
    net.layers[k].bias << -0.1;
  }
  net.layers[7].weight << -2.0;
  net.layers[7].bias << 0.5;
  const double x[5] = {1.0, 0.5, -2.0, 0.25, 3.0};
  EXPECT_NEAR(forward(net, x), -9.0125, 1e-12);

  // A negative pre-activation is clipped to zero: only the head bias remains.
  net.layers[3].bias << -10.0;
  EXPECT_EQ(forward(net, x), 0.5 - 2.0 * 0.0);
}

TEST(Forward, BatchMatchesSingle) {
  const Network net = init_network(small_arch(6), 21);
  Rng rng(22);
  Eigen::MatrixXd x(5, 7);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const Eigen::RowVectorXd batch = forward_batch(net, x);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double col[5] = {x(0, c), x(1, c), x(2, c), x(3, c), x(4, c)};
    EXPECT_DOUBLE_EQ(batch(c), forward(net, col));
  }
}

TEST(LossAndGrad, MatchesCentralFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EXPECT_LT(testing_util::gradient_discrepancy(seed), 1e-6) << "seed " << seed;
  }
}

TEST(LossAndGrad, PerfectFitHasZeroLossAndGradient) {
  const Network net = init_network(small_arch(5), 31);
  Rng rng(32);
  Eigen::MatrixXd x(5, 9);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const Eigen::RowVectorXd y = forward_batch(net, x);
  const LossAndGrad lg = loss_and_grad(net, x, y);
  EXPECT_EQ(lg.loss, 0.0);
  for (const Layer& g : lg.grad) {
    EXPECT_EQ(g.weight.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(g.bias.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(LossAndGrad, BatchLossIsMeanOfSampleLosses) {
  const Network net = init_network(small_arch(5), 41);
  Rng rng(42);
  Eigen::MatrixXd x(5, 11);
  Eigen::RowVectorXd y(11);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.normal();
  double sum = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    sum += loss_and_grad(net, x.col(c), y.segment(c, 1)).loss;
  }
  EXPECT_NEAR(loss_and_grad(net, x, y).loss, sum / 11.0, 1e-14);
}

TrainSet tiny_set(std::uint64_t seed, int n) {
  Rng rng(seed);
  TrainSet s;
  s.x.resize(5, n);
  s.y.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = 0.0;
    for (int j = 0; j < 5; ++j) {
      s.x(j, i) = rng.normal();
      t += (j + 1) * 0.2 * s.x(j, i);
    }
    s.y(i) = std::sin(t);
  }
  return s;
}

TEST(Train, ConstantValidationStopsAtEpochTwo) {
  TrainConfig cfg;
  cfg.patience = 1;
  const auto result = train(init_network(small_arch(), 1), tiny_set(1, 40),
                            [](const Network&, int) { return 1.0; }, cfg);
  EXPECT_EQ(result.history.stopped_epoch, 2);
  EXPECT_EQ(result.history.best_epoch, 1);
  EXPECT_EQ(result.history.val_loss.size(), 2u);
}

TEST(Train, LearningRateDecaysByFactorEachEpoch) {
  TrainConfig cfg;
  cfg.max_epochs = 60;
  cfg.patience = 1000;
  cfg.lr0 = 2e-3;
  int epoch = 0;
  const auto result = train(init_network(small_arch(), 2), tiny_set(2, 40),
                            [&](const Network&, int) { return 10.0 - ++epoch; }, cfg);
  const auto& lr = result.history.lr;
  ASSERT_EQ(lr.size(), 60u);
  for (std::size_t e = 0; e < lr.size(); ++e) {
    EXPECT_EQ(lr[e], 2e-3 * std::pow(0.96, static_cast<double>(e)));
    if (e > 0) EXPECT_NEAR(lr[e] / lr[e - 1], 0.96, 1e-15);
  }
}

TEST(Train, ScriptedValidationRestoresBestWeights) {
  const std::vector<double> script = {5.0, 4.0, 3.0, 3.5, 2.0, 2.5,
                                      2.0, 2.6, 2.7, 1.0, 0.5};
  std::vector<std::vector<double>> snapshots;
  TrainConfig cfg;
  cfg.patience = 3;
  const auto result = train(
      init_network(small_arch(), 3), tiny_set(3, 40),
      [&](const Network& net, int e) {
        snapshots.push_back(flatten_parameters(net));
        return script.at(static_cast<std::size_t>(e));
      },
      cfg);
  // Best 2.0 at epoch 5; epoch 7 ties it, which is not an improvement.
  EXPECT_EQ(result.history.best_epoch, 5);
  EXPECT_EQ(result.history.stopped_epoch, 8);
  EXPECT_LE(result.history.stopped_epoch - result.history.best_epoch, cfg.patience);
  EXPECT_EQ(flatten_parameters(result.net), snapshots[4]);
}

TEST(Train, HardCapAtMaxEpochs) {
  TrainConfig cfg;
  cfg.batch_size = 64;
  int e = 0;
  const auto result = train(init_network(small_arch(2), 4), tiny_set(4, 16),
                            [&](const Network&, int) { return 1.0 / ++e; }, cfg);
  EXPECT_EQ(result.history.stopped_epoch, 500);
  EXPECT_EQ(result.history.best_epoch, 500);
  EXPECT_EQ(result.history.lr.size(), 500u);
}

TEST(Train, NonFiniteValidationAborts) {
  TrainConfig cfg;
  try {
    train(init_network(small_arch(), 5), tiny_set(5, 20),
          [](const Network&, int e) { return e == 2 ? std::nan("") : 1.0 / (e + 1); },
          cfg);
    FAIL() << "expected NonFiniteLoss";
  } catch (const NonFiniteLoss& err) {
    EXPECT_NE(std::string(err.what()).find("epoch 3"), std::string::npos);
  }
}

TEST(Train, DeterministicHistory) {
  const TrainSet tr = tiny_set(6, 100);
  const TrainSet va = tiny_set(7, 20);
  TrainConfig cfg;
  cfg.max_epochs = 30;
  cfg.seed = 11;
  const auto a = train(init_network(small_arch(8), 6), tr, va, cfg);
  const auto b = train(init_network(small_arch(8), 6), tr, va, cfg);
  EXPECT_EQ(a.history.train_loss, b.history.train_loss);
  EXPECT_EQ(a.history.val_loss, b.history.val_loss);
  EXPECT_EQ(flatten_parameters(a.net), flatten_parameters(b.net));
}

TEST(Train, ReturnedNetworkHasMinimumValidationLoss) {
  const TrainSet tr = tiny_set(8, 200);
  const TrainSet va = tiny_set(9, 30);
  TrainConfig cfg;
  cfg.max_epochs = 80;
  cfg.patience = 5;
  const auto r = train(init_network(small_arch(16), 8), tr, va, cfg);
  const double best = *std::min_element(r.history.val_loss.begin(),
                                        r.history.val_loss.end());
  EXPECT_EQ(mse(r.net, va.x, va.y), best);
  EXPECT_EQ(r.history.val_loss[static_cast<std::size_t>(r.history.best_epoch - 1)], best);
}

TEST(Train, ReducesValidationLossOnSyntheticChf) {
  const auto records = synth_generate(2024, 577);
  const FitResult fit = fit_model(records, ModelKind::kHybridBowring, 2024);
  const TrainSet val_set = make_train_set(
      fit.split.validation,
      training_targets(fit.split.validation, ModelKind::kHybridBowring),
      fit.bundle.stats);
  const double untrained = mse(init_network(Architecture{}, 2024), val_set.x, val_set.y);
  const auto& val = fit.history.val_loss;
  const double best = val[static_cast<std::size_t>(fit.history.best_epoch - 1)];
  EXPECT_EQ(mse(fit.bundle.network, val_set.x, val_set.y), best);
  EXPECT_LT(best, 0.10 * untrained) << "untrained " << untrained;
  // Regression guard: value achieved by this fixed-seed run.
  EXPECT_NEAR(best, kPinnedBestValLoss, 1e-6 * kPinnedBestValLoss);
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.decay = 1.5;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.patience = 0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.max_epochs = 0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
}

}  // namespace
}  // namespace chfkit
