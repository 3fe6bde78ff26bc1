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

// Generative classifier with Gaussian class conditionals sharing one
// covariance (LDA form):
//
//   P(y = c | x) ∝ exp(mu_c^T S^{-1} x - 1/2 mu_c^T S^{-1} mu_c + log beta_c)
//
// The identity variant replaces S by I, which turns the rule into a
// nearest-mean classifier with prior offsets.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "rog/linalg.hpp"

namespace rog {

enum class CovarianceKind { kTied, kIdentity };

inline std::string_view to_string(CovarianceKind kind) {
  return kind == CovarianceKind::kTied ? "tied" : "identity";
}

inline CovarianceKind parse_covariance_kind(std::string_view s) {
  if (s == "tied") return CovarianceKind::kTied;
  if (s == "identity") return CovarianceKind::kIdentity;
  throw ValidationError("unknown covariance kind '" + std::string(s) + "'");
}

struct GaussianClassifierParams {
  Matrix means;       ///< C x d
  Matrix covariance;  ///< tied covariance, ridge included
  Matrix precision;   ///< inverse of covariance
  Vector log_priors;  ///< log beta_c, normalized
  CovarianceKind kind = CovarianceKind::kTied;

  int num_classes() const { return static_cast<int>(means.rows()); }
  Eigen::Index dim() const { return means.cols(); }
};

/// Builds validated params. priors need only be positive; they are
/// normalized here. The tied covariance gets `ridge` (default: relative ridge)
/// added before inversion.
inline GaussianClassifierParams make_gaussian_classifier(Matrix means, const Matrix& covariance, const Vector& priors,
                                                         CovarianceKind kind = CovarianceKind::kTied,
                                                         std::optional<double> ridge = std::nullopt) {
  const auto c = means.rows();
  const auto d = means.cols();
  if (c < 2 || d < 1) throw ValidationError("classifier needs C >= 2 and d >= 1");
  if (priors.size() != c) throw DimensionError("prior count does not match class count");
  if (!means.allFinite()) throw ValidationError("class means must be finite");
  if (!(priors.array() > 0.0).all() || !priors.allFinite()) throw ValidationError("priors must be positive and finite");
  GaussianClassifierParams p;
  p.means = std::move(means);
  p.kind = kind;
  p.log_priors = (priors / priors.sum()).array().log().matrix();
  if (kind == CovarianceKind::kIdentity) {
    p.covariance = Matrix::Identity(d, d);
    p.precision = Matrix::Identity(d, d);
  } else {
    if (covariance.rows() != d || covariance.cols() != d) throw DimensionError("covariance must be d x d");
    Matrix sym = 0.5 * (covariance + covariance.transpose());
    p.covariance = add_ridge(sym, ridge.value_or(relative_ridge(sym)));
    p.precision = SpdFactor(p.covariance).inverse();
  }
  return p;
}

/// Class logits mu_c^T P x - 1/2 mu_c^T P mu_c + log beta_c.
inline Vector gaussian_logits(const GaussianClassifierParams& p, const Vector& x) {
  if (x.size() != p.dim()) throw DimensionError("input dimension does not match classifier");
  const Vector px = p.precision * x;
  Vector logits(p.num_classes());
  for (int c = 0; c < p.num_classes(); ++c) {
    const Vector mu = p.means.row(c).transpose();
    logits(c) = mu.dot(px) - 0.5 * mu.dot(p.precision * mu) + p.log_priors(c);
  }
  return logits;
}

/// Row-wise logits for an N x d batch.
inline Matrix gaussian_logits(const GaussianClassifierParams& p, const Matrix& x) {
  if (x.cols() != p.dim()) throw DimensionError("input dimension does not match classifier");
  const Matrix weights = p.means * p.precision;  // C x d
  Vector bias(p.num_classes());
  for (int c = 0; c < p.num_classes(); ++c) {
    bias(c) = -0.5 * weights.row(c).dot(p.means.row(c)) + p.log_priors(c);
  }
  Matrix logits = x * weights.transpose();
  logits.rowwise() += bias.transpose();
  return logits;
}

/// log softmax with the max shift.
inline Vector log_softmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return (logits.array() - lse).matrix();
}

inline Matrix log_softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) out.row(i) = log_softmax(logits.row(i).transpose()).transpose();
  return out;
}

inline Vector softmax(const Vector& logits) { return log_softmax(logits).array().exp().matrix(); }

inline Vector posterior(const GaussianClassifierParams& p, const Vector& x) { return softmax(gaussian_logits(p, x)); }

inline Matrix log_posteriors(const GaussianClassifierParams& p, const Matrix& x) {
  return log_softmax_rows(gaussian_logits(p, x));
}

inline Matrix posteriors(const GaussianClassifierParams& p, const Matrix& x) {
  return log_posteriors(p, x).array().exp().matrix();
}

}  // namespace rog
