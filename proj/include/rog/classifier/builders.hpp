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

// Classifier params from each estimator.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rog/classifier/gaussian.hpp"
#include "rog/estimators/class_stats.hpp"
#include "rog/estimators/lts.hpp"
#include "rog/estimators/mcd.hpp"
#include "rog/estimators/trimmed_kmeans.hpp"

namespace rog {

enum class EstimatorKind { kSample, kMcd, kLtsEuclid, kTkm };

inline std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::kSample: return "sample";
    case EstimatorKind::kMcd: return "mcd";
    case EstimatorKind::kLtsEuclid: return "lts-euclid";
    case EstimatorKind::kTkm: return "tkm";
  }
  return "?";
}

inline EstimatorKind parse_estimator_kind(std::string_view s) {
  if (s == "sample") return EstimatorKind::kSample;
  if (s == "mcd") return EstimatorKind::kMcd;
  if (s == "lts-euclid") return EstimatorKind::kLtsEuclid;
  if (s == "tkm") return EstimatorKind::kTkm;
  throw ConfigError("unknown estimator '" + std::string(s) + "' (expected sample, mcd, lts-euclid or tkm)");
}

inline Matrix stack_means(std::span<const ClassStats> classes) {
  Matrix means(static_cast<Eigen::Index>(classes.size()), classes.front().mean.size());
  for (std::size_t c = 0; c < classes.size(); ++c) means.row(static_cast<Eigen::Index>(c)) = classes[c].mean.transpose();
  return means;
}

inline GaussianClassifierParams classifier_from(const SampleEstimate& e, CovarianceKind kind = CovarianceKind::kTied) {
  return make_gaussian_classifier(stack_means(e.classes), e.tied_covariance, e.priors, kind);
}

inline GaussianClassifierParams classifier_from(const McdEstimate& e, CovarianceKind kind = CovarianceKind::kTied) {
  std::vector<ClassStats> stats;
  for (const auto& f : e.classes) stats.push_back(f.stats);
  return make_gaussian_classifier(stack_means(stats), e.tied_covariance, e.priors, kind);
}

/// Cluster-derived class means, pooled covariance, uniform priors.
inline GaussianClassifierParams classifier_from(const TkmResult& r, CovarianceKind kind = CovarianceKind::kTied) {
  const auto c = static_cast<Eigen::Index>(r.classes.size());
  return make_gaussian_classifier(stack_means(r.classes), r.tied_covariance, Vector::Constant(c, 1.0 / c), kind);
}

/// Identity-covariance classifier on per-class LTS means with the MCD default
/// subset size, uniform priors.
inline GaussianClassifierParams lts_euclid_classifier(const FeatureSet& ds, const LtsConfig& cfg = {}) {
  const int classes = ds.num_classes();
  Matrix means(classes, ds.dim());
  for (int c = 0; c < classes; ++c) {
    Matrix pts = ds.class_rows(c);
    if (pts.rows() == 0) throw EmptyClassError("class " + std::to_string(c) + " has no samples");
    const auto n = static_cast<std::size_t>(pts.rows());
    const auto k = std::min(n, default_subset_size(n, static_cast<std::size_t>(ds.dim())));
    means.row(c) = lts_mean(pts, k, cfg, static_cast<std::uint64_t>(c)).transpose();
  }
  return make_gaussian_classifier(std::move(means), Matrix(), Vector::Constant(classes, 1.0 / classes),
                                  CovarianceKind::kIdentity);
}

struct FitOptions {
  McdConfig mcd;
  LtsConfig lts;
  double tkm_trim = 0.5;
};

/// One-call fit for any estimator.
inline GaussianClassifierParams fit_classifier(const FeatureSet& ds, EstimatorKind kind, const FitOptions& opt = {}) {
  switch (kind) {
    case EstimatorKind::kSample: return classifier_from(sample_estimate(ds));
    case EstimatorKind::kMcd: return classifier_from(mcd_estimate(ds, opt.mcd));
    case EstimatorKind::kLtsEuclid: return lts_euclid_classifier(ds, opt.lts);
    case EstimatorKind::kTkm: return classifier_from(trimmed_kmeans(ds, opt.tkm_trim, opt.mcd.max_iters));
  }
  throw ConfigError("unknown estimator");
}

}  // namespace rog
