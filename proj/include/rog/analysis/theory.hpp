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

// Limits of the sample and MCD estimators under the contaminated Gaussian
// model, and the quantities of the generative generalization bound.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rog/classifier/builders.hpp"
#include "rog/data/synth.hpp"
#include "rog/estimators/class_stats.hpp"
#include "rog/estimators/mcd.hpp"

namespace rog {

/// 4t / (1 + t)^2 with t the spectral condition number.
inline double phi(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) throw DimensionError("phi needs a square matrix");
  auto [lo, hi] = eigen_range(0.5 * (sigma + sigma.transpose()));
  if (!(lo > 0.0)) throw SingularCovarianceError("phi needs a positive definite matrix");
  const double t = hi / lo;
  return 4.0 * t / ((1.0 + t) * (1.0 + t));
}

/// Large-N limits of one class of the contaminated model:
///   sample mean  (1 - q) mu + q mu_out
///   sample cov   ((1 - q) s2 + q s2_out) I + q (1 - q) v v^T, v = mu - mu_out
///   MCD          mu and s2 I
struct Lemma1Limits {
  Vector mixture_mean;
  double isotropic_part = 0.0;  ///< (1 - q) s2 + q s2_out
  double rank_one_scale = 0.0;  ///< q (1 - q)
  Vector rank_one_direction;    ///< mu - mu_out
  Vector mcd_mean;
  double mcd_variance = 0.0;

  Matrix mixture_covariance() const {
    const auto d = mixture_mean.size();
    return isotropic_part * Matrix::Identity(d, d) +
           rank_one_scale * rank_one_direction * rank_one_direction.transpose();
  }
};

inline Lemma1Limits lemma1_limits(const Vector& mu, double sigma2, const Vector& out_mean, double out_sigma2,
                                  double q) {
  Lemma1Limits l;
  l.mixture_mean = (1.0 - q) * mu + q * out_mean;
  l.isotropic_part = (1.0 - q) * sigma2 + q * out_sigma2;
  l.rank_one_scale = q * (1.0 - q);
  l.rank_one_direction = mu - out_mean;
  l.mcd_mean = mu;
  l.mcd_variance = sigma2;
  return l;
}

inline Lemma1Limits lemma1_limits(const SynthSpec& spec, int c) {
  return lemma1_limits(spec.class_means.row(c).transpose(), spec.sigma2, spec.outlier_mean(), spec.out_sigma2,
                       spec.delta_out);
}

/// det of the covariance of a q-contaminated sample, as a degree-d polynomial
/// in q: a^(d-1) (a + q (1 - q) |v|^2), a = (1 - q) s2 + q s2_out.
inline double lemma1_det(double q, Eigen::Index d, double sigma2, double out_sigma2, double v_sq_norm) {
  const double a = (1.0 - q) * sigma2 + q * out_sigma2;
  return std::pow(a, static_cast<double>(d - 1)) * (a + q * (1.0 - q) * v_sq_norm);
}

/// sum_c sum_{c' != c} exp(-|mu_c - mu_c'|_2 / (8 s2) * phi(S)).
inline double generalization_bound_term(const GaussianClassifierParams& params, double sigma2) {
  if (!(sigma2 > 0.0)) throw SpecError("sigma2 must be positive");
  const double ph = params.kind == CovarianceKind::kIdentity ? 1.0 : phi(params.covariance);
  double acc = 0.0;
  for (int c = 0; c < params.num_classes(); ++c) {
    for (int k = 0; k < params.num_classes(); ++k) {
      if (k == c) continue;
      acc += std::exp(-(params.means.row(c) - params.means.row(k)).norm() / (8.0 * sigma2) * ph);
    }
  }
  return acc;
}

/// phi(S_a) |mu_a,c - mu_a,c'| / (phi(S_b) |mu_b,c - mu_b,c'|), averaged over
/// unordered class pairs.
inline double margin_ratio(const GaussianClassifierParams& robust, const GaussianClassifierParams& naive) {
  const double pr = phi(robust.covariance);
  const double pn = phi(naive.covariance);
  double acc = 0.0;
  int pairs = 0;
  for (int c = 0; c < robust.num_classes(); ++c) {
    for (int k = c + 1; k < robust.num_classes(); ++k) {
      acc += (pr * (robust.means.row(c) - robust.means.row(k)).norm()) /
             (pn * (naive.means.row(c) - naive.means.row(k)).norm());
      ++pairs;
    }
  }
  return acc / pairs;
}

struct TheoryReport {
  std::size_t n_samples = 0;  ///< N_c
  double delta_out = 0.0;
  double delta_mcd = 0.0;           ///< K_c / N_c
  Vector mean_error_mcd;            ///< |mu_c - mu_hat_c|_1 per class
  Vector mean_error_sample;         ///< |mu_c - mu_bar_c|_1 per class
  double phi_mcd = 0.0;
  double phi_sample = 0.0;
  double margin_ratio = 0.0;
  double bound_mcd = 0.0;
  double bound_sample = 0.0;
  bool a3_holds = true;             ///< s2 < s2_out
  bool a4_holds = true;             ///< delta_out < 1 - delta_mcd and delta_mcd > d / N_c
  std::vector<std::string> warnings;
};

inline TheoryReport theorem1_cell(const SynthSpec& spec, const McdConfig& cfg) {
  auto data = synthesize(spec);
  const auto& ds = data.data;
  TheoryReport r;
  r.n_samples = spec.n_per_class;
  r.delta_out = spec.delta_out;
  const auto d = static_cast<std::size_t>(spec.dim());
  const auto k = cfg.subset_size.value_or(default_subset_size(spec.n_per_class, d));
  r.delta_mcd = static_cast<double>(k) / static_cast<double>(spec.n_per_class);
  r.a3_holds = spec.out_sigma2 > spec.sigma2;
  r.a4_holds = spec.delta_out < 1.0 - r.delta_mcd && r.delta_mcd > static_cast<double>(d) / spec.n_per_class;
  if (!r.a3_holds) r.warnings.push_back("outliers are not more scattered than clean samples");
  if (!r.a4_holds) r.warnings.push_back("outlier fraction too large for the MCD subset size");

  auto naive = classifier_from(sample_estimate(ds));
  auto robust = classifier_from(mcd_estimate(ds, cfg));
  const int classes = spec.num_classes();
  r.mean_error_mcd = Vector(classes);
  r.mean_error_sample = Vector(classes);
  for (int c = 0; c < classes; ++c) {
    r.mean_error_mcd(c) = (robust.means.row(c) - spec.class_means.row(c)).lpNorm<1>();
    r.mean_error_sample(c) = (naive.means.row(c) - spec.class_means.row(c)).lpNorm<1>();
  }
  r.phi_mcd = phi(robust.covariance);
  r.phi_sample = phi(naive.covariance);
  r.margin_ratio = margin_ratio(robust, naive);
  r.bound_mcd = generalization_bound_term(robust, spec.sigma2);
  r.bound_sample = generalization_bound_term(naive, spec.sigma2);
  return r;
}

/// One report per (N_c, delta_out) cell. Each cell draws fresh data seeded
/// from (seed, N_c, cell index).
inline std::vector<TheoryReport> theorem1_report(const SynthSpec& base, const McdConfig& cfg,
                                                 std::span<const std::size_t> n_grid,
                                                 std::span<const double> delta_grid, std::uint64_t seed) {
  std::vector<TheoryReport> out;
  std::uint64_t cell = 0;
  for (auto n : n_grid) {
    for (double delta : delta_grid) {
      SynthSpec spec = base;
      spec.n_per_class = n;
      spec.delta_out = delta;
      spec.seed = make_rng(seed, {0x746865ULL, n, cell})();
      McdConfig c = cfg;
      c.seed = spec.seed;
      out.push_back(theorem1_cell(spec, c));
      ++cell;
    }
  }
  return out;
}

inline std::vector<TheoryReport> theorem1_report(const SynthSpec& base, const McdConfig& cfg,
                                                 std::span<const std::size_t> n_grid, std::uint64_t seed) {
  const double delta[] = {base.delta_out};
  return theorem1_report(base, cfg, n_grid, delta, seed);
}

inline const char* theory_csv_header() {
  return "n,delta_out,err_mcd_l1,err_sample_l1,phi_mcd,phi_sample,margin_ratio,bound_mcd,bound_sample";
}

}  // namespace rog
