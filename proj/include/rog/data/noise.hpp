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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rog/data/feature_set.hpp"
#include "rog/random.hpp"

namespace rog {

enum class NoiseKind { kUniform, kFlip, kOpenSet };

inline std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kUniform: return "uniform";
    case NoiseKind::kFlip: return "flip";
    case NoiseKind::kOpenSet: return "open-set";
  }
  return "?";
}

inline NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "uniform") return NoiseKind::kUniform;
  if (s == "flip") return NoiseKind::kFlip;
  if (s == "open-set" || s == "open_set") return NoiseKind::kOpenSet;
  throw SpecError("unknown noise kind '" + std::string(s) + "'");
}

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kUniform;
  double rate = 0.0;
  /// flip only: target class for every source class.
  std::optional<std::vector<int>> flip_map;
  std::uint64_t seed = 0;
};

/// The "next class" flip map c -> (c + 1) mod C.
inline std::vector<int> cyclic_flip_map(int num_classes) {
  std::vector<int> map(static_cast<std::size_t>(num_classes));
  for (int c = 0; c < num_classes; ++c) map[static_cast<std::size_t>(c)] = (c + 1) % num_classes;
  return map;
}

struct NoisyFeatureSet {
  FeatureSet data;
  /// true where the row was altered.
  std::vector<bool> mask;
};

/// Corrupts exactly floor(rate * N) rows chosen without replacement.
///
/// uniform and flip rewrite the label (never to its old value); open-set
/// replaces the row's features with a donor row, drawn without replacement,
/// and keeps the label.
inline NoisyFeatureSet inject_noise(const FeatureSet& ds, const NoiseSpec& spec,
                                    const FeatureSet* donor = nullptr) {
  if (!(spec.rate >= 0.0 && spec.rate < 1.0)) throw SpecError("noise rate must lie in [0, 1)");
  const int classes = ds.num_classes();
  if (spec.kind == NoiseKind::kFlip) {
    if (!spec.flip_map) throw SpecError("flip noise requires a flip map");
    if (static_cast<int>(spec.flip_map->size()) != classes) throw SpecError("flip map must cover every class");
    for (int c = 0; c < classes; ++c) {
      int t = (*spec.flip_map)[static_cast<std::size_t>(c)];
      if (t < 0 || t >= classes || t == c) {
        throw SpecError("flip map must send class " + std::to_string(c) + " to a different valid class");
      }
    }
  }
  const auto n = static_cast<std::size_t>(ds.size());
  const auto count = static_cast<std::size_t>(std::floor(spec.rate * static_cast<double>(n)));
  if (spec.kind == NoiseKind::kOpenSet) {
    if (donor == nullptr) throw SpecError("open-set noise requires a donor feature set");
    if (donor->dim() != ds.dim()) throw SpecError("donor dimension does not match");
    if (static_cast<std::size_t>(donor->size()) < count) {
      throw SpecError("donor set has " + std::to_string(donor->size()) + " rows, need " + std::to_string(count));
    }
  }

  Rng rng = make_rng(spec.seed, {0x6e6f697365ULL});
  auto rows = sample_without_replacement(n, count, rng);
  std::vector<bool> mask(n, false);
  std::vector<int> labels = ds.labels();
  Matrix features = ds.features();
  std::vector<std::size_t> donor_rows;
  if (spec.kind == NoiseKind::kOpenSet) {
    donor_rows = sample_without_replacement(static_cast<std::size_t>(donor->size()), count, rng);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = rows[k];
    mask[r] = true;
    switch (spec.kind) {
      case NoiseKind::kUniform: {
        std::uniform_int_distribution<int> shift(1, classes - 1);
        labels[r] = (labels[r] + shift(rng)) % classes;
        break;
      }
      case NoiseKind::kFlip:
        labels[r] = (*spec.flip_map)[static_cast<std::size_t>(labels[r])];
        break;
      case NoiseKind::kOpenSet:
        features.row(static_cast<Eigen::Index>(r)) = donor->features().row(static_cast<Eigen::Index>(donor_rows[k]));
        break;
    }
  }
  return {FeatureSet(std::move(features), std::move(labels), classes), std::move(mask)};
}

}  // namespace rog
