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

// The activation exporter is a separate program. These tests write files the
// way it does (hand-packed bytes plus manifest.json) and check the toolkit
// reads them.

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>

#include "rog/data/manifest.hpp"
#include "rog/data/transform.hpp"
#include "test_util.hpp"

namespace rog {
namespace {

template <typename T>
void put(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));  // test host is little endian
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

/// Average-pools N x F x H x W activations in float and emits rogf bytes.
std::string exporter_rogf(const std::vector<float>& act, std::uint64_t n, std::uint64_t f, std::uint64_t hw,
                          const std::vector<std::uint32_t>& labels, std::uint64_t classes) {
  std::string out = "ROGF";
  put<std::uint32_t>(out, 1);
  put<std::uint64_t>(out, n);
  put<std::uint64_t>(out, f);
  put<std::uint64_t>(out, classes);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t c = 0; c < f; ++c) {
      double s = 0.0;
      for (std::uint64_t p = 0; p < hw; ++p) s += act[(i * f + c) * hw + p];
      put<float>(out, static_cast<float>(s / static_cast<double>(hw)));
    }
  }
  for (auto y : labels) put<std::uint32_t>(out, y);
  return out;
}

struct FakeExport {
  test::TempDir dir;
  std::vector<std::uint32_t> labels{0, 1, 2, 1, 0, 2, 2};
  std::vector<float> act_a;  // 7 x 4 x 2 x 2
  std::vector<float> act_b;  // 7 x 3 x 1 x 1

  FakeExport() {
    Matrix a = test::gaussian_matrix(7, 16, 1);
    Matrix b = test::gaussian_matrix(7, 3, 2);
    for (Eigen::Index i = 0; i < a.size(); ++i) act_a.push_back(static_cast<float>(a.data()[i]));
    for (Eigen::Index i = 0; i < b.size(); ++i) act_b.push_back(static_cast<float>(b.data()[i]));
    write_file(dir.path() / "block3_train.rogf", exporter_rogf(act_a, 7, 4, 4, labels, 3));
    write_file(dir.path() / "fc_train.rogf", exporter_rogf(act_b, 7, 3, 1, labels, 3));
    write_file(dir.path() / "manifest.json", R"({
      "model": "toy", "pooling": "average", "seed": 0, "splits": ["train"],
      "layers": [
        {"id": "block3", "dim": 4, "files": {"train": "block3_train.rogf"}},
        {"id": "fc", "dim": 3, "files": {"train": "fc_train.rogf"}}
      ]})");
  }
};

TEST(ExporterContract, FilesLoadWithManifestDims) {
  FakeExport ex;
  auto m = load_manifest(ex.dir.path() / "manifest.json");
  EXPECT_EQ(m.model, "toy");
  EXPECT_EQ(layer_ids(m), (std::vector<std::string>{"block3", "fc"}));
  auto split = load_split(m, "train");
  ASSERT_EQ(split.num_layers(), 2u);
  EXPECT_EQ(split.layer(0).dim(), 4);
  EXPECT_EQ(split.layer(1).dim(), 3);
  EXPECT_EQ(split.size(), 7);
  EXPECT_EQ(split.labels(), (std::vector<int>{0, 1, 2, 1, 0, 2, 2}));
  EXPECT_THROW(load_split(m, "test"), ValidationError);
}

TEST(ExporterContract, PooledValuesMatchCapturedMeans) {
  FakeExport ex;
  auto ds = load_feature_set(ex.dir.path() / "block3_train.rogf");
  FeatureMaps maps{7, 4, 2, 2, std::vector<double>(ex.act_a.begin(), ex.act_a.end())};
  Matrix pooled = average_pool(maps);
  EXPECT_LT((ds.features() - pooled).cwiseAbs().maxCoeff(), 1e-6);
  auto fc = load_feature_set(ex.dir.path() / "fc_train.rogf");
  for (Eigen::Index i = 0; i < 7; ++i) {
    for (Eigen::Index c = 0; c < 3; ++c) EXPECT_EQ(fc.features()(i, c), static_cast<double>(ex.act_b[static_cast<std::size_t>(i * 3 + c)]));
  }
}

TEST(ExporterContract, ReEmissionIsByteIdentical) {
  FakeExport ex;
  auto path = ex.dir.path() / "block3_train.rogf";
  auto original = detail::read_all(path);
  auto ds = load_feature_set(path);
  const std::string again = to_rogf(ds);
  EXPECT_EQ(std::string(original.begin(), original.end()), again);
}

TEST(ExporterContract, DimMismatchAndMismatchedLabels) {
  FakeExport ex;
  write_file(ex.dir.path() / "bad.json", R"({"model": "toy", "splits": ["train"],
      "layers": [{"id": "fc", "dim": 5, "files": {"train": "fc_train.rogf"}}]})");
  EXPECT_THROW(load_split(load_manifest(ex.dir.path() / "bad.json"), "train"), DimensionError);
  auto labels = ex.labels;
  labels[0] = 1;
  write_file(ex.dir.path() / "fc_train.rogf", exporter_rogf(ex.act_b, 7, 3, 1, labels, 3));
  EXPECT_THROW(load_split(load_manifest(ex.dir.path() / "manifest.json"), "train"), ValidationError);
  write_file(ex.dir.path() / "broken.json", R"({"model": 1})");
  EXPECT_THROW(load_manifest(ex.dir.path() / "broken.json"), ParseError);
}

}  // namespace
}  // namespace rog
