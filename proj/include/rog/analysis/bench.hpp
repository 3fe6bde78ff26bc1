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

// Synthetic multi-layer suite: estimator x contamination accuracy table.
//
// The deepest layer follows the contaminated Gaussian model; shallower layers
// are the same points plus independent isotropic noise, so they carry the
// same signal less cleanly.

#pragma once

#include <array>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "rog/classifier/builders.hpp"
#include "rog/classifier/logistic.hpp"
#include "rog/classifier/predict.hpp"
#include "rog/data/synth.hpp"
#include "rog/ensemble/ensemble.hpp"

namespace rog {

inline constexpr std::array<const char*, 5> kBenchMethods = {"logistic", "tkm", "sample", "rog-single",
                                                             "rog-ensemble"};

struct BenchConfig {
  int classes = 10;
  Eigen::Index dim = 16;
  std::size_t n_per_class = 2000;
  std::size_t val_per_class = 100;
  std::size_t test_per_class = 500;
  double mean_norm = 3.0;
  double sigma2 = 1.0;
  double out_sigma2 = 4.0;
  /// Norm of the shared outlier mean; its direction is drawn from the seed.
  double out_mean_norm = 6.0;
  /// Extra noise variance per layer, shallow to deep.
  std::vector<double> layer_noise = {1.5, 0.75, 0.0};
  std::vector<double> deltas = {0.0, 0.2, 0.4, 0.6};
  std::size_t keep = 500;
  McdConfig mcd;
  LogisticConfig logistic;
  std::uint64_t seed = 0;
};

struct NoisyLayeredFeatureSet {
  LayeredFeatureSet data;
  std::vector<bool> mask;
};

/// Contaminated draw on the deepest layer, noisier copies for the others.
inline NoisyLayeredFeatureSet synthesize_layered(const SynthSpec& spec, std::span<const double> layer_noise) {
  auto deep = synthesize(spec);
  std::vector<FeatureSet> layers;
  for (std::size_t l = 0; l < layer_noise.size(); ++l) {
    Matrix x = deep.data.features();
    if (layer_noise[l] > 0.0) {
      Rng rng = make_rng(spec.seed, {0x6c61796572ULL, l});
      Matrix noise(x.rows(), x.cols());
      fill_gaussian(noise, 0, x.rows(), Vector::Zero(x.cols()), layer_noise[l], rng);
      x += noise;
    }
    layers.push_back(deep.data.with_features(std::move(x)));
  }
  return {LayeredFeatureSet(std::move(layers)), std::move(deep.mask)};
}

struct BenchCell {
  double delta = 0.0;
  std::string method;
  double accuracy = 0.0;
};

struct BenchResult {
  std::vector<BenchCell> cells;

  double accuracy(double delta, const std::string& method) const {
    for (const auto& c : cells) {
      if (c.delta == delta && c.method == method) return c.accuracy;
    }
    throw ValidationError("no bench cell for " + method);
  }
};

inline std::vector<BenchCell> bench_row(const BenchConfig& cfg, const Matrix& means, const Vector& out_mean,
                                        double delta) {
  SynthSpec spec;
  spec.class_means = means;
  spec.out_mean = out_mean;
  spec.sigma2 = cfg.sigma2;
  spec.out_sigma2 = cfg.out_sigma2;
  spec.delta_out = delta;
  auto split_seed = [&](std::uint64_t tag) {
    return make_rng(cfg.seed, {0x62656e6368ULL, tag, static_cast<std::uint64_t>(std::llround(delta * 1e6))})();
  };
  spec.n_per_class = cfg.n_per_class;
  spec.seed = split_seed(1);
  const auto train = synthesize_layered(spec, cfg.layer_noise).data;
  spec.n_per_class = cfg.val_per_class;
  spec.seed = split_seed(2);
  const auto val = synthesize_layered(spec, cfg.layer_noise).data;
  spec.n_per_class = cfg.test_per_class;
  spec.delta_out = 0.0;
  spec.seed = split_seed(3);
  const auto test = synthesize_layered(spec, cfg.layer_noise).data;

  const auto deep = train.num_layers() - 1;
  const auto& x_test = test.layer(deep).features();
  std::vector<BenchCell> row;
  auto score = [&](const char* method, const Prediction& p) {
    row.push_back({delta, method, accuracy(p.labels, test.labels())});
  };
  McdConfig mcd = cfg.mcd;
  mcd.seed = split_seed(4);
  score("logistic", predict(fit_logistic_baseline(train.layer(deep), cfg.logistic), x_test));
  score("tkm", predict(classifier_from(trimmed_kmeans(train.layer(deep), 0.5, mcd.max_iters)), x_test));
  score("sample", predict(classifier_from(sample_estimate(train.layer(deep))), x_test));
  RogConfig rog{mcd, std::min(cfg.keep, static_cast<std::size_t>(val.size())), {}};
  auto model = build_rog(train, val, rog);
  score("rog-single", predict(model.layers.back().params, x_test));
  auto logp = ensemble_log_posteriors(model, test);
  row.push_back({delta, "rog-ensemble", accuracy(argmax_rows(logp), test.labels())});
  return row;
}

inline BenchResult run_bench(const BenchConfig& cfg) {
  const Matrix means = random_class_means(cfg.classes, cfg.dim, cfg.mean_norm, cfg.seed);
  const Vector out_mean = random_class_means(2, cfg.dim, cfg.out_mean_norm, cfg.seed ^ 0x6f7574ULL).row(0).transpose();
  BenchResult out;
  for (double delta : cfg.deltas) {
    auto row = bench_row(cfg, means, out_mean, delta);
    out.cells.insert(out.cells.end(), row.begin(), row.end());
  }
  return out;
}

inline std::string bench_csv(const BenchResult& r) {
  std::ostringstream os;
  os << "delta_out,method,accuracy\n" << std::setprecision(6);
  for (const auto& c : r.cells) os << c.delta << ',' << c.method << ',' << c.accuracy << '\n';
  return os.str();
}

/// Methods as rows, contamination levels as columns, accuracy in percent.
inline std::string bench_markdown(const BenchResult& r, std::span<const double> deltas) {
  std::ostringstream os;
  os << "| method |";
  for (double d : deltas) os << " delta_out=" << d << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < deltas.size(); ++i) os << "---|";
  os << '\n' << std::fixed << std::setprecision(2);
  for (const char* m : kBenchMethods) {
    os << "| " << m << " |";
    for (double d : deltas) os << ' ' << 100.0 * r.accuracy(d, m) << " |";
    os << '\n';
  }
  return os.str();
}

}  // namespace rog
