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

#pragma once

#include "rog/classifier/gaussian.hpp"
#include "rog/linalg.hpp"

namespace rog {

/// Linear softmax head: P(y = c | x) ∝ exp(w_c^T x + b_c).
struct SoftmaxParams {
  Matrix weights;  ///< C x d
  Vector biases;   ///< C

  int num_classes() const { return static_cast<int>(weights.rows()); }
  Eigen::Index dim() const { return weights.cols(); }
};

inline Vector softmax_logits(const SoftmaxParams& p, const Vector& x) {
  if (x.size() != p.dim()) throw DimensionError("input dimension does not match softmax head");
  return p.weights * x + p.biases;
}

inline Matrix softmax_logits(const SoftmaxParams& p, const Matrix& x) {
  if (x.cols() != p.dim()) throw DimensionError("input dimension does not match softmax head");
  Matrix logits = x * p.weights.transpose();
  logits.rowwise() += p.biases.transpose();
  return logits;
}

inline Vector softmax_posterior(const SoftmaxParams& p, const Vector& x) { return softmax(softmax_logits(p, x)); }

inline Matrix log_posteriors(const SoftmaxParams& p, const Matrix& x) { return log_softmax_rows(softmax_logits(p, x)); }

inline Matrix posteriors(const SoftmaxParams& p, const Matrix& x) {
  return log_posteriors(p, x).array().exp().matrix();
}

/// The softmax head with the same posterior as an LDA classifier:
/// w_c = S^{-1} mu_c, b_c = -1/2 mu_c^T S^{-1} mu_c + log beta_c.
inline SoftmaxParams to_softmax(const GaussianClassifierParams& g) {
  SoftmaxParams s;
  s.weights = Matrix(g.num_classes(), g.dim());
  s.biases = Vector(g.num_classes());
  for (int c = 0; c < g.num_classes(); ++c) {
    const Vector w = g.precision * g.means.row(c).transpose();
    s.weights.row(c) = w.transpose();
    s.biases(c) = -0.5 * g.means.row(c).dot(w) + g.log_priors(c);
  }
  return s;
}

}  // namespace rog
