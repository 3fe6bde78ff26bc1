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

// Per-layer generative classifiers combined as sum_l alpha_l P(y | f_l(x)),
// alpha on the probability simplex.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rog/classifier/builders.hpp"
#include "rog/classifier/gaussian.hpp"
#include "rog/data/feature_set.hpp"
#include "rog/estimators/mcd.hpp"

namespace rog {

struct EnsembleLayer {
  std::string id;
  GaussianClassifierParams params;
};

struct EnsembleModel {
  std::vector<EnsembleLayer> layers;
  Vector weights;  ///< alpha, on the simplex

  std::size_t num_layers() const { return layers.size(); }
  int num_classes() const { return layers.front().params.num_classes(); }

  void validate() const {
    if (layers.empty()) throw ValidationError("ensemble needs at least one layer");
    if (static_cast<std::size_t>(weights.size()) != layers.size()) {
      throw DimensionError("ensemble weight count does not match layer count");
    }
    if (!weights.allFinite() || (weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9) {
      throw ValidationError("ensemble weights must be non-negative and sum to 1");
    }
    for (const auto& l : layers) {
      if (l.params.num_classes() != num_classes()) throw DimensionError("layers disagree on the class count");
    }
  }
};

/// Rows of val kept by the Mahalanobis filter: the `keep` rows closest to
/// their own labelled class mean under params' covariance. Ascending.
inline std::vector<std::size_t> filter_validation_rows(const FeatureSet& val, const GaussianClassifierParams& params,
                                                       std::size_t keep) {
  if (keep > static_cast<std::size_t>(val.size())) throw SpecError("keep exceeds the validation size");
  if (val.dim() != params.dim()) throw DimensionError("validation dimension does not match classifier");
  Vector dist(val.size());
  for (Eigen::Index i = 0; i < val.size(); ++i) {
    const Vector diff = val.features().row(i).transpose() - params.means.row(val.label(i)).transpose();
    dist(i) = diff.dot(params.precision * diff);
  }
  return detail::smallest_k(dist, keep);
}

inline FeatureSet filter_validation(const FeatureSet& val, const GaussianClassifierParams& params, std::size_t keep) {
  auto rows = filter_validation_rows(val, params, keep);
  return val.subset(rows);
}

/// log P_l(y_i | x_i) for the labelled class, one column per layer.
inline Matrix true_class_log_posteriors(std::span<const GaussianClassifierParams> layers, const LayeredFeatureSet& data) {
  if (layers.size() != data.num_layers()) throw DimensionError("layer count does not match data");
  Matrix out(data.size(), static_cast<Eigen::Index>(layers.size()));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix lp = log_posteriors(layers[l], data.layer(l).features());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      out(i, static_cast<Eigen::Index>(l)) = lp(i, data.labels()[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

/// -(1/N) sum_i log sum_l alpha_l P_l(y_i | x_i), in log space.
inline double mixture_nll(const Matrix& log_p, const Vector& weights) {
  const double inf = std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < log_p.rows(); ++i) {
    double m = -inf;
    for (Eigen::Index l = 0; l < log_p.cols(); ++l) {
      if (weights(l) > 0.0) m = std::max(m, std::log(weights(l)) + log_p(i, l));
    }
    if (!std::isfinite(m)) return inf;
    double s = 0.0;
    for (Eigen::Index l = 0; l < log_p.cols(); ++l) {
      if (weights(l) > 0.0) s += std::exp(std::log(weights(l)) + log_p(i, l) - m);
    }
    acc -= m + std::log(s);
  }
  return log_p.rows() == 0 ? 0.0 : acc / static_cast<double>(log_p.rows());
}

struct WeightFitConfig {
  double step = 0.5;
  std::size_t iterations = 500;
};

struct WeightFit {
  Vector weights;
  double nll = 0.0;
};

/// Exponentiated-gradient descent on the simplex from uniform weights. The
/// best iterate is kept, and a vertex replaces it only when strictly better.
inline WeightFit fit_weights_from_log_posteriors(const Matrix& log_p, const WeightFitConfig& cfg = {}) {
  const auto layers = log_p.cols();
  const auto n = log_p.rows();
  if (layers < 1) throw ValidationError("need at least one layer");
  if (n < 1) throw SpecError("weight fitting needs a non-empty validation set");
  if (log_p.hasNaN()) throw DegenerateError("NaN in layer log-posteriors");
  WeightFit best{Vector::Constant(layers, 1.0 / static_cast<double>(layers)), 0.0};
  best.nll = mixture_nll(log_p, best.weights);
  if (layers == 1) return best;

  Vector log_w = best.weights.array().log().matrix();
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    Vector grad = Vector::Zero(layers);
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector t = log_w + log_p.row(i).transpose();
      const double m = t.maxCoeff();
      if (!std::isfinite(m)) throw DegenerateError("sample has zero likelihood under every layer");
      const double log_mix = m + std::log((t.array() - m).exp().sum());
      grad -= (log_p.row(i).transpose().array() - log_mix).exp().matrix();
    }
    grad /= static_cast<double>(n);
    if (!grad.allFinite()) throw DegenerateError("non-finite ensemble gradient");
    log_w -= cfg.step * grad;
    const double m = log_w.maxCoeff();
    log_w.array() -= m + std::log((log_w.array() - m).exp().sum());
    Vector w = log_w.array().exp().matrix();
    w /= w.sum();
    const double loss = mixture_nll(log_p, w);
    if (loss < best.nll) best = {w, loss};
  }
  for (Eigen::Index l = 0; l < layers; ++l) {
    Vector e = Vector::Unit(layers, l);
    const double loss = mixture_nll(log_p, e);
    if (loss < best.nll - 1e-12) best = {e, loss};
  }
  if (!std::isfinite(best.nll)) throw DegenerateError("ensemble NLL is not finite");
  return best;
}

inline WeightFit fit_weights(std::span<const GaussianClassifierParams> layers, const LayeredFeatureSet& val,
                             const WeightFitConfig& cfg = {}) {
  return fit_weights_from_log_posteriors(true_class_log_posteriors(layers, val), cfg);
}

/// Convex combination of per-layer posteriors for one input.
inline Vector ensemble_posterior(const EnsembleModel& model, std::span<const Vector> x_per_layer) {
  if (x_per_layer.size() != model.num_layers()) throw DimensionError("need one input per layer");
  Vector out = Vector::Zero(model.num_classes());
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    out += model.weights(static_cast<Eigen::Index>(l)) * posterior(model.layers[l].params, x_per_layer[l]);
  }
  return out;
}

/// N x C ensemble log-posteriors, mixed in log space.
inline Matrix ensemble_log_posteriors(const EnsembleModel& model, std::span<const Matrix> x_per_layer) {
  if (x_per_layer.size() != model.num_layers()) throw DimensionError("need one input matrix per layer");
  const auto n = x_per_layer.front().rows();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix acc = Matrix::Constant(n, model.num_classes(), -inf);
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    const double w = model.weights(static_cast<Eigen::Index>(l));
    if (!(w > 0.0)) continue;
    if (x_per_layer[l].rows() != n) throw DimensionError("layer inputs disagree on the row count");
    Matrix lp = log_posteriors(model.layers[l].params, x_per_layer[l]).array() + std::log(w);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < acc.cols(); ++c) {
        const double a = acc(i, c);
        const double b = lp(i, c);
        const double hi = std::max(a, b);
        acc(i, c) = hi == -inf ? -inf : hi + std::log1p(std::exp(std::min(a, b) - hi));
      }
    }
  }
  return acc;
}

inline Matrix ensemble_log_posteriors(const EnsembleModel& model, const LayeredFeatureSet& data) {
  std::vector<Matrix> xs;
  for (const auto& layer : data.layers()) xs.push_back(layer.features());
  return ensemble_log_posteriors(model, xs);
}

inline Matrix ensemble_posteriors(const EnsembleModel& model, const LayeredFeatureSet& data) {
  return ensemble_log_posteriors(model, data).array().exp().matrix();
}

inline double ensemble_nll(const EnsembleModel& model, const LayeredFeatureSet& data) {
  std::vector<GaussianClassifierParams> params;
  for (const auto& l : model.layers) params.push_back(l.params);
  return mixture_nll(true_class_log_posteriors(params, data), model.weights);
}

struct RogConfig {
  McdConfig mcd;
  /// Validation rows kept by the Mahalanobis filter; nullopt keeps all.
  std::optional<std::size_t> keep;
  WeightFitConfig weights;
};

/// Weights for already-fitted layers. Validation is filtered with the last
/// (deepest) layer's params.
inline EnsembleModel assemble_ensemble(std::vector<EnsembleLayer> layers, const LayeredFeatureSet& val,
                                       std::optional<std::size_t> keep, const WeightFitConfig& wcfg = {}) {
  EnsembleModel model;
  model.layers = std::move(layers);
  if (model.layers.empty()) throw ValidationError("ensemble needs at least one layer");
  if (model.layers.size() == 1) {
    model.weights = Vector::Ones(1);
    return model;
  }
  if (val.num_layers() != model.layers.size()) throw DimensionError("validation layer count does not match model");
  std::vector<std::size_t> rows;
  if (keep) {
    rows = filter_validation_rows(val.layer(val.num_layers() - 1), model.layers.back().params, *keep);
  } else {
    rows.resize(static_cast<std::size_t>(val.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }
  const auto filtered = val.subset(rows);
  std::vector<GaussianClassifierParams> params;
  for (const auto& l : model.layers) params.push_back(l.params);
  model.weights = fit_weights(params, filtered, wcfg).weights;
  return model;
}

/// Default layer ids "layer0", "layer1", ...
inline std::vector<std::string> default_layer_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t l = 0; l < n; ++l) ids.push_back("layer" + std::to_string(l));
  return ids;
}

/// End to end: MCD classifier per layer, filtered validation, fitted weights.
inline EnsembleModel build_rog(const LayeredFeatureSet& train, const LayeredFeatureSet& val, const RogConfig& cfg,
                               std::vector<std::string> layer_ids = {}) {
  if (layer_ids.empty()) layer_ids = default_layer_ids(train.num_layers());
  if (layer_ids.size() != train.num_layers()) throw DimensionError("layer id count does not match layer count");
  std::vector<EnsembleLayer> layers;
  for (std::size_t l = 0; l < train.num_layers(); ++l) {
    layers.push_back({layer_ids[l], classifier_from(mcd_estimate(train.layer(l), cfg.mcd))});
  }
  return assemble_ensemble(std::move(layers), val, cfg.keep, cfg.weights);
}

}  // namespace rog
