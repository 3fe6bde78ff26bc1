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
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "rog/data/feature_set.hpp"
#include "rog/random.hpp"

namespace rog {

/// Dense N x F x H x W activations, row-major.
struct FeatureMaps {
  std::size_t n = 0, channels = 0, height = 0, width = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t f, std::size_t y, std::size_t x) const {
    return values[((i * channels + f) * height + y) * width + x];
  }
};

/// Spatial mean per (sample, channel): N x F x H x W -> N x F.
inline Matrix average_pool(const FeatureMaps& maps) {
  if (maps.height < 1 || maps.width < 1 || maps.channels < 1) {
    throw DimensionError("average_pool needs F, H, W >= 1");
  }
  if (maps.values.size() != maps.n * maps.channels * maps.height * maps.width) {
    throw DimensionError("feature map buffer size does not match N*F*H*W");
  }
  const std::size_t plane = maps.height * maps.width;
  Matrix out(static_cast<Eigen::Index>(maps.n), static_cast<Eigen::Index>(maps.channels));
  for (std::size_t i = 0; i < maps.n; ++i) {
    for (std::size_t f = 0; f < maps.channels; ++f) {
      const double* p = maps.values.data() + (i * maps.channels + f) * plane;
      double sum = 0.0;
      for (std::size_t k = 0; k < plane; ++k) sum += p[k];
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = sum / static_cast<double>(plane);
    }
  }
  return out;
}

/// Row indices of a train/validation split; both keep the original order.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

inline SplitIndices split_indices(std::size_t n, std::size_t validation_size, std::uint64_t seed) {
  if (validation_size >= n) {
    throw SpecError("validation size " + std::to_string(validation_size) + " must be smaller than N=" +
                    std::to_string(n));
  }
  Rng rng = make_rng(seed, {0x73706c6974ULL});
  auto val = sample_without_replacement(n, validation_size, rng);
  std::vector<bool> in_val(n, false);
  for (auto r : val) in_val[r] = true;
  SplitIndices out;
  for (std::size_t i = 0; i < n; ++i) (in_val[i] ? out.validation : out.train).push_back(i);
  return out;
}

inline std::pair<FeatureSet, FeatureSet> split(const FeatureSet& ds, std::size_t validation_size,
                                               std::uint64_t seed) {
  auto idx = split_indices(static_cast<std::size_t>(ds.size()), validation_size, seed);
  return {ds.subset(idx.train), ds.subset(idx.validation)};
}

inline std::pair<LayeredFeatureSet, LayeredFeatureSet> split(const LayeredFeatureSet& ds,
                                                             std::size_t validation_size, std::uint64_t seed) {
  auto idx = split_indices(static_cast<std::size_t>(ds.size()), validation_size, seed);
  return {ds.subset(idx.train), ds.subset(idx.validation)};
}

}  // namespace rog
