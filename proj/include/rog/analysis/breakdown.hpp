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

// Empirical breakdown: replace M of N points by a far fixed point and watch
// the location/scatter estimates.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rog/estimators/mcd.hpp"

namespace rog {

enum class LocationEstimator { kSample, kMcd };

inline constexpr double kAdversarialMagnitude = 1e6;

struct BreakdownRow {
  double fraction = 0.0;  ///< M / N
  std::size_t replaced = 0;
  double displacement = 0.0;  ///< |mean(Y_M) - mean(Y)|_2
  double error = 0.0;         ///< |mean(Y_M) - true center|_2
  double log_eig_min = 0.0;
  double log_eig_max = 0.0;
};

struct BreakdownResult {
  std::vector<BreakdownRow> rows;
  double clean_error = 0.0;  ///< error on the uncontaminated points
  /// Reference for "broken": max(clean_error, sqrt(trace(S_clean) / N)).
  double reference_error = 0.0;
  /// Smallest swept fraction whose error exceeds 10x the reference; nullopt
  /// if none.
  std::optional<double> breakdown_fraction;
};

struct BreakdownConfig {
  LocationEstimator estimator = LocationEstimator::kMcd;
  McdConfig mcd;
  double magnitude = kAdversarialMagnitude;
  double factor = 10.0;
};

namespace detail {

inline MeanCov locate(const Matrix& points, const BreakdownConfig& cfg) {
  if (cfg.estimator == LocationEstimator::kSample) return mean_cov(points);
  auto fit = mcd_fit_class(points, cfg.mcd);
  return {fit.stats.mean, fit.regularized_covariance()};
}

}  // namespace detail

/// The last M rows of `base` are replaced by magnitude * (1, ..., 1).
inline BreakdownResult breakdown_sweep(const Matrix& base, const Vector& center, std::span<const double> fractions,
                                       const BreakdownConfig& cfg = {}) {
  const auto n = base.rows();
  const auto d = base.cols();
  if (center.size() != d) throw DimensionError("center dimension does not match points");
  BreakdownResult out;
  const auto clean = detail::locate(base, cfg);
  out.clean_error = (clean.mean - center).norm();
  out.reference_error = std::max(out.clean_error, std::sqrt(mean_cov(base).cov.trace() / static_cast<double>(n)));
  for (double f : fractions) {
    if (!(f >= 0.0 && f < 1.0)) throw SpecError("contamination fraction must lie in [0, 1)");
    const auto m = static_cast<Eigen::Index>(std::llround(f * static_cast<double>(n)));
    Matrix y = base;
    y.bottomRows(m).setConstant(cfg.magnitude);
    const auto est = m == 0 ? clean : detail::locate(y, cfg);
    BreakdownRow row;
    row.fraction = f;
    row.replaced = static_cast<std::size_t>(m);
    row.displacement = (est.mean - clean.mean).norm();
    row.error = (est.mean - center).norm();
    auto [lo, hi] = eigen_range(est.cov);
    row.log_eig_min = lo > 0.0 ? std::log(lo) : -std::numeric_limits<double>::infinity();
    row.log_eig_max = std::log(hi);
    if (!out.breakdown_fraction && row.error > cfg.factor * out.reference_error) out.breakdown_fraction = f;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace rog
