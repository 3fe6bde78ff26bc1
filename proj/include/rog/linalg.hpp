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
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "rog/error.hpp"

namespace rog {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Determinants below this are treated as singular.
inline constexpr double kMinDeterminant = 1e-300;
inline const double kMinLogDeterminant = std::log(kMinDeterminant);

/// Relative ridge: eps = factor * trace(cov) / d.
inline constexpr double kDefaultRidgeFactor = 1e-6;

inline double relative_ridge(const Matrix& cov, double factor = kDefaultRidgeFactor) {
  if (cov.rows() == 0) return 0.0;
  return factor * cov.trace() / static_cast<double>(cov.rows());
}

inline Matrix add_ridge(const Matrix& cov, double ridge) {
  Matrix out = cov;
  out.diagonal().array() += ridge;
  return out;
}

/// Mean and maximum-likelihood (1/K) covariance of the selected rows.
struct MeanCov {
  Vector mean;
  Matrix cov;
};

inline MeanCov mean_cov(const Matrix& points, std::span<const std::size_t> rows) {
  const auto d = points.cols();
  MeanCov out{Vector::Zero(d), Matrix::Zero(d, d)};
  if (rows.empty()) return out;
  for (auto r : rows) out.mean += points.row(static_cast<Eigen::Index>(r)).transpose();
  out.mean /= static_cast<double>(rows.size());
  for (auto r : rows) {
    Vector c = points.row(static_cast<Eigen::Index>(r)).transpose() - out.mean;
    out.cov.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  out.cov = out.cov.selfadjointView<Eigen::Lower>();
  out.cov /= static_cast<double>(rows.size());
  return out;
}

inline MeanCov mean_cov(const Matrix& points) {
  const auto d = points.cols();
  const auto n = points.rows();
  MeanCov out{Vector::Zero(d), Matrix::Zero(d, d)};
  if (n == 0) return out;
  out.mean = points.colwise().mean().transpose();
  Matrix centered = points.rowwise() - out.mean.transpose();
  out.cov = (centered.transpose() * centered) / static_cast<double>(n);
  return out;
}

/// Log-determinant through Cholesky; -inf when the matrix is not positive
/// definite.
inline double log_det_spd(const Matrix& spd) {
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const auto& l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    double v = l(i, i);
    if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
    acc += std::log(v);
  }
  return 2.0 * acc;
}

/// Cholesky factor of a (ridge-regularized) covariance, with the operations
/// every estimator needs: batched squared Mahalanobis distance, inverse and
/// log-determinant.
class SpdFactor {
 public:
  explicit SpdFactor(const Matrix& spd) : llt_(spd) {
    if (llt_.info() != Eigen::Success) {
      throw SingularCovarianceError("covariance is not positive definite");
    }
    log_det_ = 0.0;
    const auto& l = llt_.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) log_det_ += 2.0 * std::log(l(i, i));
    if (!(log_det_ >= kMinLogDeterminant)) {
      throw SingularCovarianceError("covariance determinant below 1e-300 (log-det " +
                                    std::to_string(log_det_) + ")");
    }
  }

  double log_det() const noexcept { return log_det_; }
  Eigen::Index dim() const noexcept { return llt_.matrixLLT().rows(); }

  Matrix inverse() const {
    Matrix inv = llt_.solve(Matrix::Identity(dim(), dim()));
    return 0.5 * (inv + inv.transpose());
  }

  /// (x - mean)^T S^{-1} (x - mean) for every row x of points.
  Vector squared_distances(const Matrix& points, const Vector& mean) const {
    Matrix centered = (points.rowwise() - mean.transpose()).transpose();
    llt_.matrixL().solveInPlace(centered);
    return centered.colwise().squaredNorm().transpose();
  }

  double squared_distance(const Vector& x, const Vector& mean) const {
    Vector c = x - mean;
    llt_.matrixL().solveInPlace(c);
    return c.squaredNorm();
  }

 private:
  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
};

namespace detail {

/// Indices of the k smallest values, ties broken by index, returned ascending.
inline std::vector<std::size_t> smallest_k(const Vector& values, std::size_t k) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    const double va = values(static_cast<Eigen::Index>(a));
    const double vb = values(static_cast<Eigen::Index>(b));
    return va < vb || (va == vb && a < b);
  };
  if (k < idx.size()) {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), less);
    idx.resize(k);
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace detail

/// Largest and smallest eigenvalues of a symmetric matrix.
inline std::pair<double, double> eigen_range(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace rog
