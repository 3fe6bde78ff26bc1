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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "rog/data/feature_set.hpp"
#include "rog/data/io.hpp"
#include "rog/data/noise.hpp"
#include "rog/data/synth.hpp"
#include "rog/data/transform.hpp"
#include "test_util.hpp"

namespace rog {
namespace {

FeatureSet small_set() {
  Matrix x(4, 2);
  x << 0, 1, 1, 0, 0.5, 0.5, 2, 2;
  return FeatureSet(x, {0, 1, 0, 1}, 2);
}

TEST(FeatureSet, RejectsBadInput) {
  Matrix x = Matrix::Zero(2, 2);
  EXPECT_THROW(FeatureSet(x, {0, 2}, 2), ValidationError);
  EXPECT_THROW(FeatureSet(x, {0, 1}, 1), ValidationError);
  EXPECT_THROW(FeatureSet(x, {0}, 2), DimensionError);
  x(1, 1) = std::nan("");
  EXPECT_THROW(FeatureSet(x, {0, 1}, 2), ValidationError);
  x(1, 1) = INFINITY;
  EXPECT_THROW(FeatureSet(x, {0, 1}, 2), ValidationError);
}

TEST(FeatureSet, SubsetAndClassRows) {
  auto ds = small_set();
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(ds.rows_of_class(1), (std::vector<std::size_t>{1, 3}));
  std::vector<std::size_t> rows{3, 0};
  auto sub = ds.subset(rows);
  EXPECT_EQ(sub.size(), 2);
  EXPECT_EQ(sub.label(0), 1);
  EXPECT_DOUBLE_EQ(sub.features()(0, 0), 2.0);
}

TEST(LayeredFeatureSet, RequiresSharedLabels) {
  auto a = small_set();
  auto b = a.with_features(Matrix::Ones(4, 3));
  LayeredFeatureSet ok({a, b});
  EXPECT_EQ(ok.num_layers(), 2u);
  auto c = a.with_labels({1, 1, 0, 0});
  EXPECT_THROW(LayeredFeatureSet({a, c}), ValidationError);
}

TEST(Csv, ParsesWithoutHeader) {
  auto ds = parse_csv("0.0,1.0,0\n1.0,0.0,1\n0.5,0.5,0\n");
  EXPECT_EQ(ds.size(), 3);
  EXPECT_EQ(ds.dim(), 2);
  EXPECT_EQ(ds.num_classes(), 2);
  EXPECT_EQ(ds.labels(), (std::vector<int>{0, 1, 0}));
  EXPECT_DOUBLE_EQ(ds.features()(2, 1), 0.5);
}

TEST(Csv, HeaderDeclaresClasses) {
  auto ds = parse_csv("#d=2,C=5\n0,1,0\n1,0,1\n");
  EXPECT_EQ(ds.num_classes(), 5);
  EXPECT_THROW(parse_csv("#d=2,C=3\n0,1,5\n"), ValidationError);
  EXPECT_THROW(parse_csv("#d=3,C=3\n0,1,1\n"), DimensionError);
}

TEST(Csv, Errors) {
  EXPECT_THROW(parse_csv("0,1,0\n1,0\n"), DimensionError);
  EXPECT_THROW(parse_csv("0,abc,0\n"), ParseError);
  EXPECT_THROW(parse_csv("0,1,0.5\n"), ParseError);
  EXPECT_THROW(parse_csv("0,nan,0\n1,1,1\n"), ValidationError);
}

TEST(Csv, RoundTrip) {
  auto ds = small_set();
  auto back = parse_csv(to_csv(ds));
  EXPECT_EQ(back.features(), ds.features());
  EXPECT_EQ(back.labels(), ds.labels());
  EXPECT_EQ(back.num_classes(), ds.num_classes());
}

TEST(Rogf, ByteLayout) {
  Matrix x(1, 2);
  x << 1.0, -2.0;
  FeatureSet ds(x, {1}, 3);
  const std::string bytes = to_rogf(ds);
  ASSERT_EQ(bytes.size(), 4u + 4 + 8 * 3 + 2 * 4 + 4);
  EXPECT_EQ(bytes.substr(0, 4), "ROGF");
  auto u8 = [&](std::size_t i) { return static_cast<unsigned char>(bytes[i]); };
  EXPECT_EQ(u8(4), 1);  // version, little endian
  EXPECT_EQ(u8(8), 1);  // N
  EXPECT_EQ(u8(16), 2);  // d
  EXPECT_EQ(u8(24), 3);  // C
  // 1.0f = 0x3f800000, -2.0f = 0xc0000000
  EXPECT_EQ(u8(32), 0x00);
  EXPECT_EQ(u8(35), 0x3f);
  EXPECT_EQ(u8(36 + 3), 0xc0);
  EXPECT_EQ(u8(40), 1);
}

TEST(Rogf, RoundTripIsBitExact) {
  auto ds = synthesize(test::tiny_spec(3, 4, 50, 0.2, 11)).data;
  auto once = parse_rogf(test::as_bytes(to_rogf(ds)));
  const std::string first = to_rogf(once);
  auto twice = parse_rogf(test::as_bytes(first));
  EXPECT_EQ(to_rogf(twice), first);
  EXPECT_EQ(twice.labels(), ds.labels());
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      EXPECT_EQ(once.features()(i, j), static_cast<double>(static_cast<float>(ds.features()(i, j))));
    }
  }
}

TEST(Rogf, RejectsCorruptFiles) {
  std::string bytes = to_rogf(small_set());
  EXPECT_THROW(parse_rogf(test::as_bytes(bytes.substr(0, bytes.size() - 1))), ParseError);
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(parse_rogf(test::as_bytes(bad)), ParseError);
  bad = bytes;
  bad[4] = 2;
  EXPECT_THROW(parse_rogf(test::as_bytes(bad)), ParseError);
  bad = bytes;
  bad[bad.size() - 4] = 9;  // last label out of range
  EXPECT_THROW(parse_rogf(test::as_bytes(bad)), ValidationError);
}

TEST(Files, SaveLoadBothFormats) {
  test::TempDir dir;
  auto ds = small_set();
  save_feature_set(ds, dir.path() / "a.rogf");
  save_feature_set(ds, dir.path() / "a.csv");
  EXPECT_EQ(load_feature_set(dir.path() / "a.rogf").labels(), ds.labels());
  EXPECT_EQ(load_feature_set(dir.path() / "a.csv").features(), ds.features());
  EXPECT_THROW(load_feature_set(dir.path() / "missing.rogf"), ParseError);
  std::vector<bool> mask{true, false, false, true};
  save_mask(mask, mask_path_for(dir.path() / "a.rogf"));
  EXPECT_EQ(std::filesystem::file_size(dir.path() / "a.mask"), 4u);
  EXPECT_EQ(load_mask(dir.path() / "a.mask", 4), mask);
  EXPECT_THROW(load_mask(dir.path() / "a.mask", 5), DimensionError);
}

TEST(Noise, ZeroRateIsIdentity) {
  auto ds = small_set();
  auto out = inject_noise(ds, {NoiseKind::kUniform, 0.0, {}, 3});
  EXPECT_EQ(out.data.labels(), ds.labels());
  EXPECT_EQ(out.data.features(), ds.features());
  for (bool b : out.mask) EXPECT_FALSE(b);
}

TEST(Noise, UniformChangesExactCount) {
  Matrix x = Matrix::Zero(10, 1);
  std::vector<int> y{0, 1, 2, 0, 1, 2, 0, 1, 2, 0};
  FeatureSet ds(x, y, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto out = inject_noise(ds, {NoiseKind::kUniform, 0.4, {}, seed});
    int changed = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (out.mask[i]) {
        ++changed;
        EXPECT_NE(out.data.labels()[i], y[i]);
      } else {
        EXPECT_EQ(out.data.labels()[i], y[i]);
      }
    }
    EXPECT_EQ(changed, 4);
  }
}

TEST(Noise, UniformTargetsPassChiSquare) {
  const int classes = 10;
  const int n = 10000;
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = i % classes;
  FeatureSet ds(Matrix::Zero(n, 1), y, classes);
  auto out = inject_noise(ds, {NoiseKind::kUniform, 0.4, {}, 2024});
  // For each corrupted row, the offset (new - old) mod C should be uniform on 1..C-1.
  std::vector<double> hist(classes - 1, 0.0);
  int corrupted = 0;
  for (int i = 0; i < n; ++i) {
    if (!out.mask[static_cast<std::size_t>(i)]) continue;
    ++corrupted;
    const int shift = (out.data.labels()[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)] + classes) % classes;
    hist[static_cast<std::size_t>(shift - 1)] += 1.0;
  }
  EXPECT_EQ(corrupted, 4000);
  const double expected = corrupted / 9.0;
  double chi2 = 0.0;
  for (double h : hist) chi2 += (h - expected) * (h - expected) / expected;
  // 99th percentile of chi-square with 8 degrees of freedom.
  EXPECT_LT(chi2, 20.090);
}

TEST(Noise, FlipFollowsMap) {
  auto ds = synthesize(test::tiny_spec(4, 2, 25, 0.0, 1)).data;
  auto map = cyclic_flip_map(4);
  auto out = inject_noise(ds, {NoiseKind::kFlip, 0.3, map, 5});
  int changed = 0;
  for (std::size_t i = 0; i < out.mask.size(); ++i) {
    if (out.mask[i]) {
      ++changed;
      EXPECT_EQ(out.data.labels()[i], map[static_cast<std::size_t>(ds.labels()[i])]);
    }
  }
  EXPECT_EQ(changed, 30);
  EXPECT_THROW(inject_noise(ds, {NoiseKind::kFlip, 0.3, {}, 5}), SpecError);
  EXPECT_THROW(inject_noise(ds, {NoiseKind::kFlip, 0.3, std::vector<int>{0, 2, 3, 1}, 5}), SpecError);
  EXPECT_THROW(inject_noise(ds, {NoiseKind::kUniform, 1.0, {}, 5}), SpecError);
}

TEST(Noise, OpenSetReplacesFeaturesKeepsLabels) {
  auto ds = synthesize(test::tiny_spec(2, 3, 20, 0.0, 1)).data;
  FeatureSet donor(Matrix::Constant(30, 3, 99.0), std::vector<int>(30, 0), 2);
  auto out = inject_noise(ds, {NoiseKind::kOpenSet, 0.5, {}, 9}, &donor);
  EXPECT_EQ(out.data.labels(), ds.labels());
  int replaced = 0;
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    if (out.mask[static_cast<std::size_t>(i)]) {
      ++replaced;
      EXPECT_EQ(out.data.features()(i, 0), 99.0);
    } else {
      EXPECT_EQ(out.data.features().row(i), ds.features().row(i));
    }
  }
  EXPECT_EQ(replaced, 20);
  EXPECT_THROW(inject_noise(ds, {NoiseKind::kOpenSet, 0.5, {}, 9}), SpecError);
  FeatureSet small_donor(Matrix::Zero(5, 3), std::vector<int>(5, 0), 2);
  EXPECT_THROW(inject_noise(ds, {NoiseKind::kOpenSet, 0.5, {}, 9}, &small_donor), SpecError);
}

TEST(Noise, Deterministic) {
  auto ds = synthesize(test::tiny_spec(3, 2, 40, 0.0, 1)).data;
  auto a = inject_noise(ds, {NoiseKind::kUniform, 0.25, {}, 77});
  auto b = inject_noise(ds, {NoiseKind::kUniform, 0.25, {}, 77});
  EXPECT_EQ(a.data.labels(), b.data.labels());
  EXPECT_EQ(a.mask, b.mask);
}

TEST(Synth, CleanMeansConverge) {
  SynthSpec spec = test::tiny_spec(2, 4, 50000, 0.0, 3);
  auto out = synthesize(spec);
  for (int c = 0; c < 2; ++c) {
    Vector mean = out.data.class_rows(c).colwise().mean().transpose();
    EXPECT_LT((mean - spec.class_means.row(c).transpose()).cwiseAbs().maxCoeff(), 0.05);
  }
}

TEST(Synth, MixtureMomentsMatchClosedForm) {
  SynthSpec spec;
  spec.class_means = Matrix(2, 1);
  spec.class_means << 2.0, -2.0;
  spec.sigma2 = 1.0;
  spec.out_sigma2 = 4.0;
  spec.delta_out = 0.25;
  spec.n_per_class = 100000;
  spec.seed = 5;
  auto out = synthesize(spec);
  Vector x = out.data.class_rows(0).col(0);
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  // (1 - q) mu and (1 - q) s2 + q s2_out + q (1 - q) mu^2 by hand.
  EXPECT_NEAR(mean, 0.75 * 2.0, 0.05);
  EXPECT_NEAR(var, 0.75 * 1.0 + 0.25 * 4.0 + 0.25 * 0.75 * 4.0, 0.1);
}

TEST(Synth, MaskAndCleanCovariance) {
  SynthSpec spec = test::tiny_spec(2, 3, 20000, 0.3, 8);
  auto out = synthesize(spec);
  const auto clean = clean_count(spec);
  EXPECT_EQ(clean, 14000u);
  std::size_t outliers = 0;
  for (bool b : out.mask) outliers += b;
  EXPECT_EQ(outliers, 2 * (20000 - clean));
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> rows;
    for (auto r : out.data.rows_of_class(c)) {
      if (!out.mask[r]) rows.push_back(r);
    }
    auto mc = mean_cov(out.data.features(), rows);
    const double frob = (mc.cov - spec.sigma2 * Matrix::Identity(3, 3)).norm();
    EXPECT_LT(frob, 5.0 / std::sqrt(static_cast<double>(rows.size())));
  }
}

TEST(Synth, Validation) {
  SynthSpec spec = test::tiny_spec(2, 2, 10, 0.0, 1);
  spec.sigma2 = 0.0;
  EXPECT_THROW(synthesize(spec), SpecError);
  spec = test::tiny_spec(2, 2, 10, 1.0, 1);
  EXPECT_THROW(synthesize(spec), SpecError);
  spec = test::tiny_spec(2, 2, 10, 0.0, 1);
  spec.out_sigma2 = -1.0;
  EXPECT_THROW(synthesize(spec), SpecError);
}

TEST(Synth, DeterministicAndSeedSensitive) {
  auto a = synthesize(test::tiny_spec(3, 2, 100, 0.2, 4)).data;
  auto b = synthesize(test::tiny_spec(3, 2, 100, 0.2, 4)).data;
  auto c = synthesize(test::tiny_spec(3, 2, 100, 0.2, 5)).data;
  EXPECT_EQ(a.features(), b.features());
  EXPECT_NE(a.features(), c.features());
}

TEST(AveragePool, Examples) {
  FeatureMaps maps{1, 1, 2, 2, {1, 2, 3, 7}};
  EXPECT_DOUBLE_EQ(average_pool(maps)(0, 0), 3.25);
  FeatureMaps ident{2, 3, 1, 1, {1, 2, 3, 4, 5, 6}};
  Matrix p = average_pool(ident);
  EXPECT_EQ(p.rows(), 2);
  EXPECT_DOUBLE_EQ(p(1, 2), 6.0);
  FeatureMaps constant{2, 2, 3, 2, std::vector<double>(24, 1.5)};
  EXPECT_TRUE((average_pool(constant).array() == 1.5).all());
  FeatureMaps bad{1, 1, 0, 2, {}};
  EXPECT_THROW(average_pool(bad), DimensionError);
  FeatureMaps wrong{1, 1, 2, 2, {1, 2, 3}};
  EXPECT_THROW(average_pool(wrong), DimensionError);
}

TEST(Split, Boundaries) {
  auto ds = synthesize(test::tiny_spec(2, 2, 500, 0.0, 1)).data;
  auto [train0, val0] = split(ds, 0, 3);
  EXPECT_EQ(val0.size(), 0);
  EXPECT_EQ(train0.features(), ds.features());
  auto [train1, val1] = split(ds, 999, 3);
  EXPECT_EQ(train1.size(), 1);
  EXPECT_EQ(val1.size(), 999);
  EXPECT_THROW(split(ds, 1000, 3), SpecError);
}

TEST(Split, DisjointExhaustiveDeterministic) {
  auto idx = split_indices(100, 30, 42);
  auto again = split_indices(100, 30, 42);
  EXPECT_EQ(idx.train, again.train);
  EXPECT_EQ(idx.validation, again.validation);
  std::set<std::size_t> all(idx.train.begin(), idx.train.end());
  all.insert(idx.validation.begin(), idx.validation.end());
  EXPECT_EQ(all.size(), 100u);
  EXPECT_EQ(idx.validation.size(), 30u);
}

}  // namespace
}  // namespace rog
