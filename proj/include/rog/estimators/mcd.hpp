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

// Minimum Covariance Determinant.
//
// For one class with N_c points, find the K_c-subset whose sample covariance
// has the smallest determinant. Two solvers share one objective:
//
//  * C-steps: start from a random subset, then repeatedly keep the K_c points
//    with the smallest Mahalanobis distance under the current estimate. Each
//    step cannot increase the determinant; the best of R restarts is kept.
//  * exact: enumerate every K_c-subset. Exponential, so it is capped and is
//    meant as a ground truth for small instances.
//
// Determinants are compared as log det(S + eps I) with eps the configured
// ridge, or 1e-6 * trace(S) / d of the subset's own covariance S.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "rog/data/feature_set.hpp"
#include "rog/estimators/class_stats.hpp"
#include "rog/linalg.hpp"
#include "rog/parallel.hpp"
#include "rog/random.hpp"

namespace rog {

enum class McdMode { kCStep, kExact };

/// How each C-step restart picks its first K-subset.
enum class McdInit {
  kRandomSubset,  ///< uniform K_c-subset
  kElemental,     ///< uniform (d+1)-subset, grown until non-singular, then one concentration
};

enum class PriorKind { kUniform, kSubsetSize };

struct McdConfig {
  std::optional<std::size_t> subset_size;  ///< K_c; default floor((N_c + d + 1) / 2)
  std::size_t max_iters = 2;
  std::size_t restarts = 10;
  std::optional<double> ridge;  ///< absolute eps; default relative to each subset covariance
  McdMode mode = McdMode::kCStep;
  McdInit init = McdInit::kRandomSubset;
  PriorKind priors = PriorKind::kUniform;
  std::uint64_t seed = 0;
};

inline constexpr double kMaxExactSubsets = 1e6;
/// A C-step whose log-determinant drops by less than this ends the restart.
inline constexpr double kEarlyStopTolerance = 1e-12;

inline std::size_t default_subset_size(std::size_t n, std::size_t d) { return (n + d + 1) / 2; }

/// n choose k in floating point (exact for the sizes the enumeration cap allows).
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

struct McdClassFit {
  ClassStats stats;  ///< ML mean/covariance of the selected subset, no ridge
  double ridge = 0.0;
  double log_det = 0.0;                ///< log det(stats.covariance + ridge I)
  std::vector<std::size_t> selected;   ///< ascending, indexes the rows passed in
  std::vector<std::vector<double>> traces;  ///< log-det after each step, per restart
  std::size_t best_restart = 0;

  Matrix regularized_covariance() const { return add_ridge(stats.covariance, ridge); }
};

namespace detail {

struct SubsetEval {
  MeanCov mc;
  double ridge = 0.0;
  double log_det = 0.0;
};

inline SubsetEval evaluate_subset(const Matrix& points, std::span<const std::size_t> rows,
                                  std::optional<double> ridge) {
  SubsetEval e{mean_cov(points, rows), 0.0, 0.0};
  e.ridge = ridge.value_or(relative_ridge(e.mc.cov));
  e.log_det = log_det_spd(add_ridge(e.mc.cov, e.ridge));
  return e;
}

inline void require_nonsingular(const SubsetEval& e) {
  if (!(e.log_det >= kMinLogDeterminant)) {
    throw SingularCovarianceError("MCD subset covariance is singular after ridge (log-det " +
                                  std::to_string(e.log_det) + ")");
  }
}

inline std::vector<std::size_t> concentrate(const Matrix& points, const SubsetEval& e, std::size_t k) {
  SpdFactor factor(add_ridge(e.mc.cov, e.ridge));
  return smallest_k(factor.squared_distances(points, e.mc.mean), k);
}

inline std::vector<std::size_t> elemental_start(const Matrix& points, std::size_t k, const McdConfig& cfg,
                                                Rng& rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  auto order = sample_without_replacement(n, n, rng);
  std::size_t take = std::min(n, d + 1);
  while (true) {
    std::vector<std::size_t> rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(rows.begin(), rows.end());
    auto e = evaluate_subset(points, rows, cfg.ridge);
    if (e.log_det >= kMinLogDeterminant) return concentrate(points, e, k);
    if (take == n) require_nonsingular(e);
    ++take;
  }
}

inline void validate(std::size_t n, std::size_t d, std::size_t k, const McdConfig& cfg) {
  if (n <= d) {
    throw ConfigError("MCD needs more points than dimensions (N_c=" + std::to_string(n) + ", d=" +
                      std::to_string(d) + ")");
  }
  if (k <= d || k > n) {
    throw ConfigError("MCD subset size K_c=" + std::to_string(k) + " must satisfy d < K_c <= N_c");
  }
  if (cfg.restarts < 1) throw ConfigError("MCD needs at least one restart");
  if (cfg.ridge && !(*cfg.ridge >= 0.0)) throw ConfigError("ridge must be non-negative");
  if (cfg.mode == McdMode::kExact && binomial(n, k) > kMaxExactSubsets) {
    std::ostringstream msg;
    msg << "exact MCD would enumerate " << std::setprecision(3) << binomial(n, k) << " subsets (cap 1e6)";
    throw ConfigError(msg.str());
  }
}

inline McdClassFit finish(std::vector<std::size_t> rows, SubsetEval e) {
  McdClassFit fit;
  fit.stats = {std::move(e.mc.mean), std::move(e.mc.cov), rows.size()};
  fit.ridge = e.ridge;
  fit.log_det = e.log_det;
  fit.selected = std::move(rows);
  return fit;
}

inline McdClassFit fit_exact(const Matrix& points, std::size_t k, const McdConfig& cfg) {
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<std::size_t> combo(k);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  std::vector<std::size_t> best_rows;
  SubsetEval best;
  best.log_det = std::numeric_limits<double>::infinity();
  bool have = false;
  while (true) {
    auto e = evaluate_subset(points, combo, cfg.ridge);
    if (!have || e.log_det < best.log_det) {
      best = std::move(e);
      best_rows = combo;
      have = true;
    }
    // Advance to the next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  require_nonsingular(best);
  auto fit = finish(std::move(best_rows), std::move(best));
  fit.traces = {{fit.log_det}};
  return fit;
}

inline McdClassFit fit_csteps(const Matrix& points, std::size_t k, const McdConfig& cfg, std::uint64_t stream) {
  const auto n = static_cast<std::size_t>(points.rows());
  std::optional<McdClassFit> best;
  std::vector<std::vector<double>> traces;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, {0x6d6364ULL, stream, r});
    std::vector<std::size_t> rows;
    if (cfg.init == McdInit::kElemental) {
      rows = elemental_start(points, k, cfg, rng);
    } else {
      rows = sample_without_replacement(n, k, rng);
      std::sort(rows.begin(), rows.end());
    }
    auto current = evaluate_subset(points, rows, cfg.ridge);
    require_nonsingular(current);
    std::vector<double> trace{current.log_det};
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
      auto next_rows = concentrate(points, current, k);
      if (next_rows == rows) break;  // fixed point, determinant unchanged
      auto next = evaluate_subset(points, next_rows, cfg.ridge);
      require_nonsingular(next);
      trace.push_back(next.log_det);
      const bool stalled = !(current.log_det - next.log_det >= kEarlyStopTolerance);
      rows = std::move(next_rows);
      current = std::move(next);
      if (stalled) break;
    }
    traces.push_back(std::move(trace));
    if (!best || current.log_det < best->log_det) {
      best = finish(rows, std::move(current));
      best->best_restart = r;
    }
  }
  best->traces = std::move(traces);
  return std::move(*best);
}

}  // namespace detail

/// MCD for the rows of one class. `stream` separates the random streams of
/// different classes that share cfg.seed.
inline McdClassFit mcd_fit_class(const Matrix& points, const McdConfig& cfg, std::uint64_t stream = 0) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  const std::size_t k = cfg.subset_size.value_or(default_subset_size(n, d));
  detail::validate(n, d, k, cfg);
  if (!points.allFinite()) throw ValidationError("MCD input contains NaN or Inf");
  return cfg.mode == McdMode::kExact ? detail::fit_exact(points, k, cfg) : detail::fit_csteps(points, k, cfg, stream);
}

struct McdEstimate {
  std::vector<McdClassFit> classes;
  /// Selected rows per class, as indices into the fitted FeatureSet.
  std::vector<std::vector<std::size_t>> selected_rows;
  /// sum_c K_c S_c / sum_c K_c
  Matrix tied_covariance;
  Vector priors;
};

/// Per-class MCD and the subset-size-weighted tied covariance. Classes are
/// fitted in parallel; results do not depend on the thread count.
inline McdEstimate mcd_estimate(const FeatureSet& ds, const McdConfig& cfg) {
  const int classes = ds.num_classes();
  std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) {
    rows[static_cast<std::size_t>(c)] = ds.rows_of_class(c);
    if (rows[static_cast<std::size_t>(c)].empty()) {
      throw EmptyClassError("class " + std::to_string(c) + " has no samples");
    }
  }
  McdEstimate out;
  out.classes.resize(static_cast<std::size_t>(classes));
  out.selected_rows.resize(static_cast<std::size_t>(classes));
  parallel_for(static_cast<std::size_t>(classes), [&](std::size_t c) {
    auto fit = mcd_fit_class(ds.class_rows(static_cast<int>(c)), cfg, c);
    auto& global = out.selected_rows[c];
    global.reserve(fit.selected.size());
    for (auto local : fit.selected) global.push_back(rows[c][local]);
    out.classes[c] = std::move(fit);
  });
  std::vector<ClassStats> stats;
  stats.reserve(out.classes.size());
  for (const auto& f : out.classes) stats.push_back(f.stats);
  out.tied_covariance = pool_covariances(stats);
  out.priors = Vector::Constant(classes, 1.0 / classes);
  if (cfg.priors == PriorKind::kSubsetSize) {
    double total = 0.0;
    for (const auto& s : stats) total += static_cast<double>(s.count);
    for (int c = 0; c < classes; ++c) out.priors(c) = static_cast<double>(stats[static_cast<std::size_t>(c)].count) / total;
  }
  return out;
}

}  // namespace rog
