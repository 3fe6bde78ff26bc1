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

// Reader for the manifest.json an activation exporter writes next to its
// rogf files:
//
//   {"model": "resnet34", "pooling": "average", "seed": 0,
//    "splits": ["train", "test"],
//    "layers": [{"id": "block4", "dim": 512,
//                "files": {"train": "block4_train.rogf", "test": "..."}}]}

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rog/data/feature_set.hpp"
#include "rog/data/io.hpp"

namespace rog {

struct ManifestLayer {
  std::string id;
  Eigen::Index dim = 0;
  std::map<std::string, std::filesystem::path> files;  ///< split -> path
};

struct ExportManifest {
  std::string model;
  std::string pooling;
  std::uint64_t seed = 0;
  std::vector<std::string> splits;
  std::vector<ManifestLayer> layers;
  std::filesystem::path root;  ///< directory relative paths resolve against
};

inline ExportManifest parse_manifest(const std::string& text, const std::filesystem::path& root) {
  ExportManifest m;
  m.root = root;
  try {
    auto j = nlohmann::json::parse(text);
    m.model = j.at("model").get<std::string>();
    m.pooling = j.value("pooling", "average");
    m.seed = j.value("seed", std::uint64_t{0});
    m.splits = j.at("splits").get<std::vector<std::string>>();
    for (const auto& l : j.at("layers")) {
      ManifestLayer layer;
      layer.id = l.at("id").get<std::string>();
      layer.dim = l.at("dim").get<Eigen::Index>();
      for (const auto& [split, file] : l.at("files").items()) layer.files[split] = file.get<std::string>();
      m.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what());
  }
  if (m.layers.empty()) throw ValidationError("manifest lists no layers");
  return m;
}

inline ExportManifest load_manifest(const std::filesystem::path& path) {
  auto bytes = detail::read_all(path);
  return parse_manifest(std::string(bytes.begin(), bytes.end()), path.parent_path());
}

/// All layers of one split, checked against the manifest's dims; layers must
/// share N and labels.
inline LayeredFeatureSet load_split(const ExportManifest& m, const std::string& split) {
  std::vector<FeatureSet> layers;
  for (const auto& l : m.layers) {
    auto it = l.files.find(split);
    if (it == l.files.end()) throw ValidationError("layer " + l.id + " has no file for split " + split);
    auto path = it->second.is_absolute() ? it->second : m.root / it->second;
    auto ds = load_feature_set(path, FileFormat::kRogf);
    if (ds.dim() != l.dim) {
      throw DimensionError("layer " + l.id + ": file has d=" + std::to_string(ds.dim()) + ", manifest says " +
                           std::to_string(l.dim));
    }
    layers.push_back(std::move(ds));
  }
  return LayeredFeatureSet(std::move(layers));
}

inline std::vector<std::string> layer_ids(const ExportManifest& m) {
  std::vector<std::string> ids;
  for (const auto& l : m.layers) ids.push_back(l.id);
  return ids;
}

}  // namespace rog
