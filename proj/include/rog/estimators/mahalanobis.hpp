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

#include <optional>

#include "rog/estimators/class_stats.hpp"
#include "rog/linalg.hpp"

namespace rog {

/// Squared Mahalanobis distance (x - mean)^T (cov + eps I)^{-1} (x - mean).
/// eps defaults to the relative ridge of cov.
inline double mahalanobis(const Vector& x, const Vector& mean, const Matrix& cov,
                          std::optional<double> ridge = std::nullopt) {
  if (x.size() != mean.size() || cov.rows() != mean.size()) throw DimensionError("mahalanobis: dimension mismatch");
  SpdFactor factor(add_ridge(cov, ridge.value_or(relative_ridge(cov))));
  return factor.squared_distance(x, mean);
}

inline double mahalanobis(const Vector& x, const ClassStats& stats, std::optional<double> ridge = std::nullopt) {
  return mahalanobis(x, stats.mean, stats.covariance, ridge);
}

}  // namespace rog
