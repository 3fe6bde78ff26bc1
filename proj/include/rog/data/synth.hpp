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
#include <cstdint>
#include <random>
#include <vector>

#include "rog/data/feature_set.hpp"
#include "rog/data/noise.hpp"
#include "rog/random.hpp"

namespace rog {

/// Contaminated isotropic Gaussian classes.
///
/// Each class c has floor((1 - delta_out) * n_per_class) clean rows from
/// N(mu_c, sigma2 I); the remaining rows are outliers from
/// N(out_mean, out_sigma2 I) that still carry label c.
struct SynthSpec {
  Matrix class_means;  ///< C x d
  double sigma2 = 1.0;
  Vector out_mean;  ///< d; empty means the origin
  double out_sigma2 = 4.0;
  double delta_out = 0.0;
  std::size_t n_per_class = 1000;
  std::uint64_t seed = 0;

  int num_classes() const { return static_cast<int>(class_means.rows()); }
  Eigen::Index dim() const { return class_means.cols(); }
  Vector outlier_mean() const { return out_mean.size() == 0 ? Vector::Zero(dim()) : out_mean; }

  /// Outliers more scattered than clean samples.
  bool outliers_scattered() const { return out_sigma2 > sigma2; }

  void validate() const {
    if (class_means.rows() < 1 || class_means.cols() < 1) throw SpecError("class means must be non-empty");
    if (!(sigma2 > 0.0)) throw SpecError("sigma2 must be positive");
    if (!(out_sigma2 > 0.0)) throw SpecError("out_sigma2 must be positive");
    if (!(delta_out >= 0.0 && delta_out < 1.0)) throw SpecError("delta_out must lie in [0, 1)");
    if (out_mean.size() != 0 && out_mean.size() != class_means.cols()) {
      throw SpecError("out_mean dimension does not match class means");
    }
    if (n_per_class < 1) throw SpecError("n_per_class must be >= 1");
  }
};

/// Number of clean rows per class.
inline std::size_t clean_count(const SynthSpec& spec) {
  return static_cast<std::size_t>(std::floor((1.0 - spec.delta_out) * static_cast<double>(spec.n_per_class)));
}

/// Fills rows [first, first + n) with mean + sqrt(var) * N(0, I).
inline void fill_gaussian(Matrix& out, Eigen::Index first, Eigen::Index n, const Vector& mean, double var, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(var);
  for (Eigen::Index i = first; i < first + n; ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = mean(j) + sd * normal(rng);
  }
}

/// One contaminated Gaussian: the per-class building block of synthesize().
/// Clean rows come first, outliers last; the mask marks outliers.
struct ContaminatedSample {
  Matrix points;
  std::vector<bool> mask;
};

inline ContaminatedSample synthesize_class(const Vector& mean, double sigma2, const Vector& out_mean,
                                           double out_sigma2, double delta_out, std::size_t n, Rng& rng) {
  const auto n_clean = static_cast<Eigen::Index>(std::floor((1.0 - delta_out) * static_cast<double>(n)));
  const auto total = static_cast<Eigen::Index>(n);
  ContaminatedSample out{Matrix(total, mean.size()), std::vector<bool>(n, false)};
  fill_gaussian(out.points, 0, n_clean, mean, sigma2, rng);
  fill_gaussian(out.points, n_clean, total - n_clean, out_mean, out_sigma2, rng);
  for (Eigen::Index i = n_clean; i < total; ++i) out.mask[static_cast<std::size_t>(i)] = true;
  return out;
}

/// Class-major rows; the mask marks outlier rows. Deterministic in spec.seed.
inline NoisyFeatureSet synthesize(const SynthSpec& spec) {
  spec.validate();
  if (spec.num_classes() < 2) throw SpecError("synthesize needs at least two classes");
  const auto classes = spec.num_classes();
  const auto n = static_cast<Eigen::Index>(spec.n_per_class);
  Matrix features(n * classes, spec.dim());
  std::vector<int> labels(static_cast<std::size_t>(n * classes));
  std::vector<bool> mask(labels.size(), false);
  const Vector out_mean = spec.outlier_mean();
  for (int c = 0; c < classes; ++c) {
    Rng rng = make_rng(spec.seed, {0x73796e7468ULL, static_cast<std::uint64_t>(c)});
    auto block = synthesize_class(spec.class_means.row(c).transpose(), spec.sigma2, out_mean, spec.out_sigma2,
                                  spec.delta_out, spec.n_per_class, rng);
    features.middleRows(c * n, n) = block.points;
    for (Eigen::Index i = 0; i < n; ++i) {
      labels[static_cast<std::size_t>(c * n + i)] = c;
      mask[static_cast<std::size_t>(c * n + i)] = block.mask[static_cast<std::size_t>(i)];
    }
  }
  return {FeatureSet(std::move(features), std::move(labels), classes), std::move(mask)};
}

/// C random directions in R^d, each scaled to Euclidean norm `norm`.
inline Matrix random_class_means(int num_classes, Eigen::Index dim, double norm, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x6d65616e73ULL});
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix means(num_classes, dim);
  for (int c = 0; c < num_classes; ++c) {
    for (Eigen::Index j = 0; j < dim; ++j) means(c, j) = normal(rng);
    means.row(c) *= norm / means.row(c).norm();
  }
  return means;
}

}  // namespace rog
