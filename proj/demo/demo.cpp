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

// Library tour: contaminated three-layer features, a sample-estimate
// classifier, a per-layer MCD classifier and the weighted ensemble.

#include <iomanip>
#include <iostream>

#include "rog/rog.hpp"

int main() {
  using namespace rog;

  SynthSpec spec;
  spec.class_means = random_class_means(5, 8, 3.0, 42);
  spec.out_mean = random_class_means(2, 8, 6.0, 43).row(0).transpose();
  spec.delta_out = 0.4;
  spec.n_per_class = 800;
  spec.seed = 1;
  const std::vector<double> layer_noise = {1.0, 0.5, 0.0};
  const auto train = synthesize_layered(spec, layer_noise).data;

  spec.n_per_class = 100;
  spec.seed = 2;
  const auto val = synthesize_layered(spec, layer_noise).data;

  spec.delta_out = 0.0;
  spec.n_per_class = 400;
  spec.seed = 3;
  const auto test = synthesize_layered(spec, layer_noise).data;

  const auto deep = train.num_layers() - 1;
  const auto naive = classifier_from(sample_estimate(train.layer(deep)));
  RogConfig cfg;
  cfg.keep = 300;
  const auto model = build_rog(train, val, cfg, {"shallow", "middle", "deep"});

  std::cout << std::fixed << std::setprecision(4);
  std::cout << "sample estimate, deep layer: "
            << accuracy(predict(naive, test.layer(deep).features()).labels, test.labels()) << '\n';
  std::cout << "MCD, deep layer:             "
            << accuracy(predict(model.layers.back().params, test.layer(deep).features()).labels, test.labels())
            << '\n';
  std::cout << "MCD ensemble:                "
            << accuracy(argmax_rows(ensemble_log_posteriors(model, test)), test.labels()) << '\n';
  std::cout << "layer weights:";
  for (std::size_t l = 0; l < model.num_layers(); ++l) std::cout << ' ' << model.layers[l].id << '=' << model.weights(l);
  std::cout << '\n';
  return 0;
}
