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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "rog/estimators/mcd.hpp"
#include "rog/linalg.hpp"
#include "rog/random.hpp"

namespace rog {

/// Least trimmed squares location: the mean of the K-subset with the
/// smallest sum of squared Euclidean residuals.
struct LtsConfig {
  std::size_t restarts = 10;
  std::size_t max_iters = 100;
  McdMode mode = McdMode::kCStep;
  std::uint64_t seed = 0;
};

namespace detail {

inline double trimmed_sse(const Matrix& points, std::span<const std::size_t> rows, const Vector& mean) {
  double sse = 0.0;
  for (auto r : rows) sse += (points.row(static_cast<Eigen::Index>(r)).transpose() - mean).squaredNorm();
  return sse;
}

inline Vector subset_mean(const Matrix& points, std::span<const std::size_t> rows) {
  Vector m = Vector::Zero(points.cols());
  for (auto r : rows) m += points.row(static_cast<Eigen::Index>(r)).transpose();
  return m / static_cast<double>(rows.size());
}

}  // namespace detail

inline Vector lts_mean(const Matrix& points, std::size_t k, const LtsConfig& cfg = {}, std::uint64_t stream = 0) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1 || k > n) throw ConfigError("LTS subset size must satisfy 1 <= K <= N");
  if (cfg.mode == McdMode::kExact) {
    if (binomial(n, k) > kMaxExactSubsets) throw ConfigError("exact LTS enumeration over the 1e6 cap");
    std::vector<std::size_t> combo(k);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    Vector best_mean;
    while (true) {
      Vector m = detail::subset_mean(points, combo);
      double sse = detail::trimmed_sse(points, combo, m);
      if (sse < best) {
        best = sse;
        best_mean = m;
      }
      std::size_t i = k;
      while (i > 0 && combo[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    return best_mean;
  }
  if (k == n) return points.colwise().mean().transpose();

  double best = std::numeric_limits<double>::infinity();
  Vector best_mean;
  for (std::size_t r = 0; r < std::max<std::size_t>(cfg.restarts, 1); ++r) {
    Rng rng = make_rng(cfg.seed, {0x6c7473ULL, stream, r});
    auto rows = sample_without_replacement(n, k, rng);
    std::sort(rows.begin(), rows.end());
    Vector m = detail::subset_mean(points, rows);
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
      Vector dist = (points.rowwise() - m.transpose()).rowwise().squaredNorm();
      auto next = detail::smallest_k(dist, k);
      if (next == rows) break;
      rows = std::move(next);
      m = detail::subset_mean(points, rows);
    }
    double sse = detail::trimmed_sse(points, rows, m);
    if (sse < best) {
      best = sse;
      best_mean = m;
    }
  }
  return best_mean;
}

}  // namespace rog
