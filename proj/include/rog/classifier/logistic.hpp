// Copyright 2026 The RoG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Multinomial logistic regression trained on (possibly noisy) labels. Stands
// in for a network's own softmax head when only features are available.

#pragma once

#include <cstddef>
#include <optional>

#include "rog/classifier/softmax.hpp"
#include "rog/data/feature_set.hpp"

namespace rog {

struct LogisticConfig {
  double l2 = 1e-3;
  std::size_t epochs = 1000;
  /// Fixed gradient step; default 1 / (smoothness bound of the loss).
  std::optional<double> step;
};

struct LossAndGradient {
  double loss = 0.0;
  Matrix grad_weights;
  Vector grad_biases;
};

/// (1/N) sum_i -log softmax(W x_i + b)_{y_i} + (l2 / 2) ||W||_F^2.
/// Biases are not penalized.
inline LossAndGradient logistic_loss_and_gradient(const SoftmaxParams& p, const FeatureSet& ds, double l2) {
  const auto n = static_cast<double>(ds.size());
  Matrix logp = log_posteriors(p, ds.features());
  LossAndGradient out;
  Matrix residual = logp.array().exp().matrix();  // P - Y
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    out.loss -= logp(i, ds.label(i));
    residual(i, ds.label(i)) -= 1.0;
  }
  out.loss = out.loss / n + 0.5 * l2 * p.weights.squaredNorm();
  out.grad_weights = residual.transpose() * ds.features() / n + l2 * p.weights;
  out.grad_biases = residual.colwise().sum().transpose() / n;
  return out;
}

/// Full-batch gradient descent from zero weights. Deterministic.
inline SoftmaxParams fit_logistic_baseline(const FeatureSet& ds, const LogisticConfig& cfg = {}) {
  const int c = ds.num_classes();
  SoftmaxParams p{Matrix::Zero(c, ds.dim()), Vector::Zero(c)};
  // Softmax cross-entropy has Hessian <= 1/2 * (1/N) sum ||[x; 1]||^2 + l2.
  const double mean_sq = (ds.features().rowwise().squaredNorm().array() + 1.0).mean();
  const double step = cfg.step.value_or(1.0 / (0.5 * mean_sq + cfg.l2));
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    auto g = logistic_loss_and_gradient(p, ds, cfg.l2);
    p.weights -= step * g.grad_weights;
    p.biases -= step * g.grad_biases;
  }
  return p;
}

}  // namespace rog
