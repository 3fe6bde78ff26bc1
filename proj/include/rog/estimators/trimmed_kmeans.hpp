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

// Trimmed K-means with C clusters seeded from the noisy class means.
//
// Noisy labels enter only twice: the initial centroids, and the final
// majority vote that names each cluster. In between the algorithm is
// unsupervised: assign to the nearest centroid, drop the globally farthest
// trim_fraction of points, recompute centroids.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "rog/data/feature_set.hpp"
#include "rog/estimators/class_stats.hpp"
#include "rog/linalg.hpp"

namespace rog {

struct TkmResult {
  Matrix centroids;                 ///< C x d, cluster order
  std::vector<int> cluster_labels;  ///< majority noisy label of each cluster
  std::vector<int> assignment;      ///< nearest cluster per row under the final centroids
  std::vector<bool> retained;       ///< false for trimmed rows
  std::vector<ClassStats> classes;  ///< per class, from the clusters named after it
  Matrix tied_covariance;           ///< pooled over retained rows
  std::size_t empty_cluster_restarts = 0;
  std::vector<int> classes_without_cluster;
};

namespace detail {

struct TkmPass {
  std::vector<int> assignment;
  Vector distance;  ///< squared distance to the assigned centroid
  std::vector<bool> retained;
};

inline TkmPass tkm_assign(const Matrix& x, const Matrix& centroids, double trim_fraction) {
  const auto n = x.rows();
  TkmPass pass{std::vector<int>(static_cast<std::size_t>(n)), Vector(n), std::vector<bool>(static_cast<std::size_t>(n))};
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    pass.distance(i) = (centroids.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
    pass.assignment[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  const auto trimmed = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(n)));
  auto keep = smallest_k(pass.distance, static_cast<std::size_t>(n) - trimmed);
  for (auto r : keep) pass.retained[r] = true;
  return pass;
}

}  // namespace detail

inline TkmResult trimmed_kmeans(const FeatureSet& ds, double trim_fraction = 0.5, std::size_t iters = 2) {
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) throw ConfigError("trim fraction must lie in [0, 1)");
  const int k = ds.num_classes();
  const Matrix& x = ds.features();
  TkmResult out;
  out.centroids = Matrix(k, ds.dim());
  for (int c = 0; c < k; ++c) {
    auto rows = ds.rows_of_class(c);
    if (rows.empty()) throw EmptyClassError("class " + std::to_string(c) + " has no samples");
    out.centroids.row(c) = mean_cov(x, rows).mean.transpose();
  }

  for (std::size_t it = 0; it < iters; ++it) {
    auto pass = detail::tkm_assign(x, out.centroids, trim_fraction);
    Matrix sums = Matrix::Zero(k, ds.dim());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (!pass.retained[static_cast<std::size_t>(i)]) continue;
      auto a = pass.assignment[static_cast<std::size_t>(i)];
      sums.row(a) += x.row(i);
      ++counts[static_cast<std::size_t>(a)];
    }
    // Empty clusters restart at the farthest retained points, one each.
    std::vector<std::size_t> by_distance;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (pass.retained[static_cast<std::size_t>(i)]) by_distance.push_back(static_cast<std::size_t>(i));
    }
    std::stable_sort(by_distance.begin(), by_distance.end(), [&](std::size_t a, std::size_t b) {
      return pass.distance(static_cast<Eigen::Index>(a)) > pass.distance(static_cast<Eigen::Index>(b));
    });
    std::size_t next_far = 0;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        out.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else if (next_far < by_distance.size()) {
        out.centroids.row(c) = x.row(static_cast<Eigen::Index>(by_distance[next_far++]));
        ++out.empty_cluster_restarts;
      }
    }
  }

  auto final_pass = detail::tkm_assign(x, out.centroids, trim_fraction);
  out.assignment = final_pass.assignment;
  out.retained = final_pass.retained;

  // Majority vote of noisy labels among retained members; ties go to the
  // lowest label, memberless clusters keep their seeding class.
  std::vector<std::vector<std::size_t>> votes(static_cast<std::size_t>(k), std::vector<std::size_t>(static_cast<std::size_t>(k), 0));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (!out.retained[static_cast<std::size_t>(i)]) continue;
    ++votes[static_cast<std::size_t>(out.assignment[static_cast<std::size_t>(i)])][static_cast<std::size_t>(ds.label(i))];
  }
  out.cluster_labels.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const auto& v = votes[static_cast<std::size_t>(c)];
    auto top = std::max_element(v.begin(), v.end());
    out.cluster_labels[static_cast<std::size_t>(c)] = *top == 0 ? c : static_cast<int>(top - v.begin());
  }

  std::vector<std::vector<std::size_t>> class_rows(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (!out.retained[static_cast<std::size_t>(i)]) continue;
    auto cluster = out.assignment[static_cast<std::size_t>(i)];
    class_rows[static_cast<std::size_t>(out.cluster_labels[static_cast<std::size_t>(cluster)])].push_back(static_cast<std::size_t>(i));
  }
  for (int c = 0; c < k; ++c) {
    auto rows = class_rows[static_cast<std::size_t>(c)];
    if (rows.empty()) {
      // No cluster carries this label: fall back to its noisy-label rows.
      out.classes_without_cluster.push_back(c);
      for (auto r : ds.rows_of_class(c)) {
        if (out.retained[r]) rows.push_back(r);
      }
      if (rows.empty()) rows = ds.rows_of_class(c);
    }
    auto mc = mean_cov(x, rows);
    out.classes.push_back({std::move(mc.mean), std::move(mc.cov), rows.size()});
  }
  out.tied_covariance = pool_covariances(out.classes);
  return out;
}

}  // namespace rog
