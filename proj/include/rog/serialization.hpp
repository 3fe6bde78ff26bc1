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

// JSON forms of fitted estimators, classifiers and ensemble bundles.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rog/classifier/gaussian.hpp"
#include "rog/data/io.hpp"
#include "rog/ensemble/ensemble.hpp"
#include "rog/estimators/mcd.hpp"

namespace rog {

using Json = nlohmann::ordered_json;

inline Json vector_to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

/// Row-major nested arrays.
inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty JSON matrix");
  const auto cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols) throw DimensionError("ragged JSON matrix");
    m.row(static_cast<Eigen::Index>(i)) = vector_from_json(j[i]).transpose();
  }
  return m;
}

/// Per class: selected indices (into the fitted data), mean, covariance as a
/// flat row-major array, log-determinant.
inline Json mcd_to_json(const McdEstimate& e) {
  Json classes = Json::array();
  for (std::size_t c = 0; c < e.classes.size(); ++c) {
    const auto& f = e.classes[c];
    const Matrix cov = f.stats.covariance;
    std::vector<double> flat;
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
      for (Eigen::Index k = 0; k < cov.cols(); ++k) flat.push_back(cov(i, k));
    }
    classes.push_back(Json{{"class", c},
                           {"indices", e.selected_rows[c]},
                           {"mean", vector_to_json(f.stats.mean)},
                           {"covariance", flat},
                           {"log_det", f.log_det},
                           {"ridge", f.ridge},
                           {"trace", f.traces.empty() ? std::vector<double>{} : f.traces[f.best_restart]}});
  }
  return Json{{"classes", classes},
              {"tied_covariance", matrix_to_json(e.tied_covariance)},
              {"priors", vector_to_json(e.priors)}};
}

inline Json classifier_to_json(const GaussianClassifierParams& p) {
  return Json{{"kind", std::string(to_string(p.kind))},
              {"num_classes", p.num_classes()},
              {"dim", p.dim()},
              {"means", matrix_to_json(p.means)},
              {"covariance", matrix_to_json(p.covariance)},
              {"priors", vector_to_json(p.log_priors.array().exp().matrix())}};
}

/// The stored covariance already carries its ridge; none is added on load.
inline GaussianClassifierParams classifier_from_json(const Json& j) {
  try {
    const auto kind = parse_covariance_kind(j.at("kind").get<std::string>());
    return make_gaussian_classifier(matrix_from_json(j.at("means")), matrix_from_json(j.at("covariance")),
                                    vector_from_json(j.at("priors")), kind, 0.0);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad classifier JSON: ") + e.what());
  }
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

/// Writes <dir>/<layer id>.json per layer and <dir>/ensemble.json referencing
/// them by relative path. Returns the bundle path.
inline std::filesystem::path save_ensemble(const EnsembleModel& model, const std::filesystem::path& dir,
                                           const Json& extra = Json::object()) {
  model.validate();
  Json layers = Json::array();
  for (const auto& l : model.layers) {
    const std::string file = l.id + ".json";
    write_json(dir / file, classifier_to_json(l.params));
    layers.push_back(Json{{"id", l.id}, {"file", file}});
  }
  Json bundle{{"layers", layers}, {"weights", vector_to_json(model.weights)}};
  for (const auto& [k, v] : extra.items()) bundle[k] = v;
  const auto path = dir / "ensemble.json";
  write_json(path, bundle);
  return path;
}

inline EnsembleModel load_ensemble(const std::filesystem::path& bundle_path) {
  const Json bundle = read_json(bundle_path);
  EnsembleModel model;
  try {
    for (const auto& l : bundle.at("layers")) {
      const auto file = bundle_path.parent_path() / l.at("file").get<std::string>();
      model.layers.push_back({l.at("id").get<std::string>(), classifier_from_json(read_json(file))});
    }
    model.weights = vector_from_json(bundle.at("weights"));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad ensemble bundle: ") + e.what());
  }
  model.validate();
  return model;
}

}  // namespace rog
