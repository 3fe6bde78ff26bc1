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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rog/data/feature_set.hpp"
#include "rog/linalg.hpp"

namespace rog {

/// Location/scatter of one class. covariance is the 1/count (ML) estimate.
struct ClassStats {
  Vector mean;
  Matrix covariance;
  std::size_t count = 0;
};

/// Count-weighted average of per-class covariances.
inline Matrix pool_covariances(std::span<const ClassStats> classes) {
  if (classes.empty()) throw ValidationError("cannot pool zero covariances");
  Matrix pooled = Matrix::Zero(classes.front().covariance.rows(), classes.front().covariance.cols());
  double total = 0.0;
  for (const auto& c : classes) {
    pooled += static_cast<double>(c.count) * c.covariance;
    total += static_cast<double>(c.count);
  }
  if (!(total > 0.0)) throw ValidationError("cannot pool covariances with zero total count");
  return pooled / total;
}

struct SampleEstimate {
  std::vector<ClassStats> classes;
  /// (1/N) sum_c sum_{i: y_i = c} (x_i - mean_c)(x_i - mean_c)^T
  Matrix tied_covariance;
  /// N_c / N
  Vector priors;
};

/// Plain per-class sample mean and covariance, pooled into one tied
/// covariance over all N rows.
inline SampleEstimate sample_estimate(const FeatureSet& ds) {
  SampleEstimate out;
  const int classes = ds.num_classes();
  out.priors = Vector::Zero(classes);
  for (int c = 0; c < classes; ++c) {
    auto rows = ds.rows_of_class(c);
    if (rows.empty()) throw EmptyClassError("class " + std::to_string(c) + " has no samples");
    auto mc = mean_cov(ds.features(), rows);
    out.classes.push_back({std::move(mc.mean), std::move(mc.cov), rows.size()});
    out.priors(c) = static_cast<double>(rows.size()) / static_cast<double>(ds.size());
  }
  out.tied_covariance = pool_covariances(out.classes);
  return out;
}

}  // namespace rog
