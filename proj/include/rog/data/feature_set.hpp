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
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rog/error.hpp"
#include "rog/linalg.hpp"

namespace rog {

/// N x d feature matrix with 0-based class labels in [0, C).
///
/// Immutable once built; the constructor enforces finiteness, label range,
/// C >= 2 and d >= 1. N = 0 is allowed only through empty(), which exists
/// so that splits can express an empty side.
class FeatureSet {
 public:
  FeatureSet(Matrix features, std::vector<int> labels, int num_classes)
      : features_(std::move(features)), labels_(std::move(labels)), num_classes_(num_classes) {
    if (num_classes_ < 2) throw ValidationError("num_classes must be >= 2");
    if (features_.cols() < 1) throw DimensionError("feature dimension must be >= 1");
    if (features_.rows() < 1) throw ValidationError("feature set must contain at least one row");
    validate();
  }

  static FeatureSet empty(Eigen::Index dim, int num_classes) {
    if (num_classes < 2) throw ValidationError("num_classes must be >= 2");
    if (dim < 1) throw DimensionError("feature dimension must be >= 1");
    FeatureSet fs;
    fs.features_ = Matrix(0, dim);
    fs.num_classes_ = num_classes;
    return fs;
  }

  const Matrix& features() const noexcept { return features_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  int num_classes() const noexcept { return num_classes_; }
  Eigen::Index size() const noexcept { return features_.rows(); }
  Eigen::Index dim() const noexcept { return features_.cols(); }
  bool is_empty() const noexcept { return features_.rows() == 0; }

  int label(Eigen::Index row) const { return labels_[static_cast<std::size_t>(row)]; }

  /// Rows in the given order.
  FeatureSet subset(std::span<const std::size_t> rows) const {
    if (rows.empty()) return empty(dim(), num_classes_);
    Matrix f(static_cast<Eigen::Index>(rows.size()), dim());
    std::vector<int> l(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      f.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(rows[i]));
      l[i] = labels_[rows[i]];
    }
    return FeatureSet(std::move(f), std::move(l), num_classes_);
  }

  FeatureSet with_labels(std::vector<int> labels) const {
    return FeatureSet(features_, std::move(labels), num_classes_);
  }

  FeatureSet with_features(Matrix features) const {
    return FeatureSet(std::move(features), labels_, num_classes_);
  }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes_), 0);
    for (int y : labels_) ++counts[static_cast<std::size_t>(y)];
    return counts;
  }

  std::vector<std::size_t> rows_of_class(int c) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == c) rows.push_back(i);
    }
    return rows;
  }

  Matrix class_rows(int c) const {
    auto rows = rows_of_class(c);
    Matrix out(static_cast<Eigen::Index>(rows.size()), dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
  }

 private:
  FeatureSet() = default;

  void validate() const {
    if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
      throw DimensionError("label count " + std::to_string(labels_.size()) +
                           " does not match row count " + std::to_string(features_.rows()));
    }
    if (!features_.allFinite()) throw ValidationError("features contain NaN or Inf");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] < 0 || labels_[i] >= num_classes_) {
        throw ValidationError("label " + std::to_string(labels_[i]) + " at row " +
                              std::to_string(i) + " outside [0, " +
                              std::to_string(num_classes_) + ")");
      }
    }
  }

  Matrix features_;
  std::vector<int> labels_;
  int num_classes_ = 0;
};

/// Per-layer feature sets over the same samples. Layer dimensions may differ.
class LayeredFeatureSet {
 public:
  explicit LayeredFeatureSet(std::vector<FeatureSet> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ValidationError("layered feature set needs at least one layer");
    for (std::size_t l = 1; l < layers_.size(); ++l) {
      if (layers_[l].size() != layers_[0].size() ||
          layers_[l].labels() != layers_[0].labels() ||
          layers_[l].num_classes() != layers_[0].num_classes()) {
        throw ValidationError("layer " + std::to_string(l) +
                              " disagrees with layer 0 on N, labels or C");
      }
    }
  }

  std::size_t num_layers() const noexcept { return layers_.size(); }
  const FeatureSet& layer(std::size_t l) const { return layers_.at(l); }
  const std::vector<FeatureSet>& layers() const noexcept { return layers_; }
  const std::vector<int>& labels() const noexcept { return layers_.front().labels(); }
  int num_classes() const noexcept { return layers_.front().num_classes(); }
  Eigen::Index size() const noexcept { return layers_.front().size(); }

  LayeredFeatureSet subset(std::span<const std::size_t> rows) const {
    std::vector<FeatureSet> out;
    out.reserve(layers_.size());
    for (const auto& l : layers_) out.push_back(l.subset(rows));
    return LayeredFeatureSet(std::move(out));
  }

 private:
  std::vector<FeatureSet> layers_;
};

}  // namespace rog
