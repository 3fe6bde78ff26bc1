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

// Everything.

#pragma once

#include "rog/analysis/bench.hpp"
#include "rog/analysis/breakdown.hpp"
#include "rog/analysis/theory.hpp"
#include "rog/classifier/builders.hpp"
#include "rog/classifier/gaussian.hpp"
#include "rog/classifier/logistic.hpp"
#include "rog/classifier/predict.hpp"
#include "rog/classifier/softmax.hpp"
#include "rog/data/feature_set.hpp"
#include "rog/data/io.hpp"
#include "rog/data/manifest.hpp"
#include "rog/data/noise.hpp"
#include "rog/data/synth.hpp"
#include "rog/data/transform.hpp"
#include "rog/ensemble/ensemble.hpp"
#include "rog/error.hpp"
#include "rog/estimators/class_stats.hpp"
#include "rog/estimators/lts.hpp"
#include "rog/estimators/mahalanobis.hpp"
#include "rog/estimators/mcd.hpp"
#include "rog/estimators/trimmed_kmeans.hpp"
#include "rog/linalg.hpp"
#include "rog/parallel.hpp"
#include "rog/random.hpp"
#include "rog/serialization.hpp"
