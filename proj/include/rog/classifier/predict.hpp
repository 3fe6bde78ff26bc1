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

#include <cmath>
#include <span>
#include <vector>

#include "rog/classifier/gaussian.hpp"
#include "rog/classifier/softmax.hpp"

namespace rog {

struct Prediction {
  std::vector<int> labels;
  Matrix posteriors;  ///< N x C
};

/// Row-wise argmax; ties go to the lowest class index.
inline std::vector<int> argmax_rows(const Matrix& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(i, c) > scores(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

template <typename Params>
Prediction predict(const Params& params, const Matrix& x) {
  Matrix logp = log_posteriors(params, x);
  return {argmax_rows(logp), logp.array().exp().matrix()};
}

inline double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw DimensionError("prediction and label counts differ");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

/// Per-class recall; classes absent from truth get NaN.
inline Vector per_class_accuracy(std::span<const int> predicted, std::span<const int> truth, int num_classes) {
  Vector hits = Vector::Zero(num_classes);
  Vector totals = Vector::Zero(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    totals(truth[i]) += 1.0;
    hits(truth[i]) += predicted[i] == truth[i] ? 1.0 : 0.0;
  }
  return hits.cwiseQuotient(totals);
}

/// Mean -log P(y_i | x_i) from a matrix of posteriors.
inline double mean_nll(const Matrix& posteriors, std::span<const int> truth) {
  if (static_cast<std::size_t>(posteriors.rows()) != truth.size()) throw DimensionError("posterior and label counts differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) acc -= std::log(posteriors(static_cast<Eigen::Index>(i), truth[i]));
  return truth.empty() ? 0.0 : acc / static_cast<double>(truth.size());
}

}  // namespace rog
