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

#include <Eigen/LU>
#include <cmath>
#include <random>

#include "rog/classifier/builders.hpp"
#include "rog/classifier/gaussian.hpp"
#include "rog/classifier/logistic.hpp"
#include "rog/classifier/predict.hpp"
#include "rog/classifier/softmax.hpp"
#include "test_util.hpp"

namespace rog {
namespace {

GaussianClassifierParams one_d(double mu0, double mu1) {
  Matrix means(2, 1);
  means << mu0, mu1;
  return make_gaussian_classifier(means, Matrix::Identity(1, 1), Vector::Ones(2), CovarianceKind::kTied, 0.0);
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

/// Bayes rule with full Gaussian densities, through an LU inverse.
Vector bayes_posterior(const Matrix& means, const Matrix& cov, const Vector& priors, const Vector& x) {
  Eigen::FullPivLU<Matrix> lu(cov);
  const Matrix inv = lu.inverse();
  const double norm = 1.0 / std::sqrt(std::pow(2 * M_PI, static_cast<double>(x.size())) * lu.determinant());
  Vector joint(means.rows());
  for (Eigen::Index c = 0; c < means.rows(); ++c) {
    const Vector diff = x - means.row(c).transpose();
    joint(c) = priors(c) * norm * std::exp(-0.5 * diff.dot(inv * diff));
  }
  return joint / joint.sum();
}

TEST(Posterior, HandExamples) {
  auto p = one_d(0.0, 2.0);
  Vector post = posterior(p, vec({0.0}));
  // logits (0, -2): 1 / (1 + e^-2)
  EXPECT_NEAR(post(0), 1.0 / (1.0 + std::exp(-2.0)), 1e-12);
  EXPECT_NEAR(post(0), 0.8808, 5e-5);
  EXPECT_NEAR(post(1), 0.1192, 5e-5);
  Vector mid = posterior(p, vec({1.0}));
  EXPECT_NEAR(mid(0), 0.5, 1e-12);
  auto sym = one_d(-1.5, 1.5);
  EXPECT_NEAR(posterior(sym, vec({0.0}))(1), 0.5, 1e-12);
}

TEST(Posterior, MatchesBayesRuleOnDensities) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int c = 2 + trial % 4;
    const Eigen::Index d = 1 + trial % 5;
    Matrix means = test::gaussian_matrix(c, d, 100 + trial, 2.0);
    Matrix cov = test::random_spd(d, 200 + trial);
    Vector priors(c);
    for (int k = 0; k < c; ++k) priors(k) = u(rng);
    auto params = make_gaussian_classifier(means, cov, priors, CovarianceKind::kTied, 0.0);
    Vector x = test::gaussian_matrix(d, 1, 300 + trial, 2.0).col(0);
    EXPECT_LT((posterior(params, x) - bayes_posterior(means, cov, priors / priors.sum(), x)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Posterior, StableForHugeLogits) {
  Vector logits = vec({1e4, -1e4, 9999.5, 0.0});
  Vector p = softmax(logits);
  EXPECT_TRUE(p.allFinite());
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_NEAR(p(0) / p(2), std::exp(0.5), 1e-9);
  Vector shifted = softmax((logits.array() + 123.0).matrix());
  EXPECT_LT((shifted - p).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Posterior, BatchMatchesSingle) {
  auto ds = synthesize(test::tiny_spec(3, 4, 30, 0.1, 2)).data;
  auto params = classifier_from(sample_estimate(ds));
  Matrix batch = posteriors(params, ds.features());
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    EXPECT_LT((batch.row(i).transpose() - posterior(params, ds.features().row(i).transpose())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(batch.row(i).sum(), 1.0, 1e-12);
  }
}

TEST(Softmax, ZeroParamsAreUniform) {
  SoftmaxParams p{Matrix::Zero(4, 3), Vector::Zero(4)};
  Vector post = softmax_posterior(p, vec({1, 2, 3}));
  for (int c = 0; c < 4; ++c) EXPECT_DOUBLE_EQ(post(c), 0.25);
}

TEST(Softmax, EquivalentToLda) {
  for (int trial = 0; trial < 300; ++trial) {
    const int c = 2 + trial % 5;
    const Eigen::Index d = 1 + trial % 6;
    Matrix means = test::gaussian_matrix(c, d, trial, 3.0);
    Vector priors = test::gaussian_matrix(c, 1, trial + 1).col(0).array().abs() + 0.05;
    auto g = make_gaussian_classifier(means, test::random_spd(d, trial), priors);
    auto s = to_softmax(g);
    Vector x = test::gaussian_matrix(d, 1, trial + 2, 3.0).col(0);
    EXPECT_LT((posterior(g, x) - softmax_posterior(s, x)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  FeatureSet ds(test::gaussian_matrix(10, 3, 5), {0, 1, 2, 0, 1, 2, 0, 1, 2, 0}, 3);
  SoftmaxParams p{test::gaussian_matrix(3, 3, 6, 0.5), test::gaussian_matrix(3, 1, 7, 0.5).col(0)};
  const double l2 = 0.1;
  auto g = logistic_loss_and_gradient(p, ds, l2);
  const double h = 1e-6;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      SoftmaxParams a = p, b = p;
      a.weights(i, j) += h;
      b.weights(i, j) -= h;
      const double fd = (logistic_loss_and_gradient(a, ds, l2).loss - logistic_loss_and_gradient(b, ds, l2).loss) / (2 * h);
      worst = std::max(worst, std::abs(fd - g.grad_weights(i, j)));
    }
    SoftmaxParams a = p, b = p;
    a.biases(i) += h;
    b.biases(i) -= h;
    const double fd = (logistic_loss_and_gradient(a, ds, l2).loss - logistic_loss_and_gradient(b, ds, l2).loss) / (2 * h);
    worst = std::max(worst, std::abs(fd - g.grad_biases(i)));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Logistic, SeparableDataIsLearned) {
  Matrix x(8, 1);
  x << -3, -2.5, -2, -1, 1, 2, 2.5, 3;
  FeatureSet ds(x, {0, 0, 0, 0, 1, 1, 1, 1}, 2);
  auto p = fit_logistic_baseline(ds);
  EXPECT_DOUBLE_EQ(accuracy(predict(p, x).labels, ds.labels()), 1.0);
}

TEST(Logistic, WeightNormShrinksWithL2) {
  auto ds = synthesize(test::tiny_spec(3, 4, 40, 0.0, 9)).data;
  double prev = INFINITY;
  for (double l2 : {0.01, 0.1, 1.0}) {
    LogisticConfig cfg;
    cfg.l2 = l2;
    const double norm = fit_logistic_baseline(ds, cfg).weights.norm();
    EXPECT_LT(norm, prev);
    prev = norm;
  }
}

TEST(Logistic, Deterministic) {
  auto ds = synthesize(test::tiny_spec(3, 2, 20, 0.0, 1)).data;
  EXPECT_EQ(fit_logistic_baseline(ds).weights, fit_logistic_baseline(ds).weights);
}

TEST(Predict, TieGoesToLowestIndex) {
  Matrix means = Matrix::Zero(2, 2);
  auto p = make_gaussian_classifier(means, Matrix::Identity(2, 2), Vector::Ones(2));
  auto pred = predict(p, test::gaussian_matrix(5, 2, 1));
  for (int l : pred.labels) EXPECT_EQ(l, 0);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(pred.posteriors(i, 0), 0.5);
}

TEST(Predict, FarPointIsConfident) {
  Matrix means(3, 2);
  means << 0, 0, 10, 0, 0, 10;
  auto p = make_gaussian_classifier(means, Matrix::Identity(2, 2), Vector::Ones(3));
  auto pred = predict(p, means);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(pred.labels[static_cast<std::size_t>(c)], c);
    EXPECT_GT(pred.posteriors(c, c), 0.999);
  }
}

TEST(Predict, PriorScaleInvariance) {
  Matrix means = test::gaussian_matrix(3, 2, 4);
  Vector priors = vec({0.2, 0.3, 0.5});
  auto a = make_gaussian_classifier(means, Matrix::Identity(2, 2), priors);
  auto b = make_gaussian_classifier(means, Matrix::Identity(2, 2), 17.0 * priors);
  Matrix x = test::gaussian_matrix(50, 2, 5);
  EXPECT_EQ(predict(a, x).labels, predict(b, x).labels);
  EXPECT_LT((predict(a, x).posteriors - predict(b, x).posteriors).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Predict, IdentityKindMatchesIsotropicTied) {
  Matrix means = test::gaussian_matrix(4, 3, 11, 2.0);
  auto tied = make_gaussian_classifier(means, 2.5 * Matrix::Identity(3, 3), Vector::Ones(4));
  auto ident = make_gaussian_classifier(means, Matrix(), Vector::Ones(4), CovarianceKind::kIdentity);
  Matrix x = test::gaussian_matrix(200, 3, 12, 2.0);
  auto labels = predict(ident, x).labels;
  EXPECT_EQ(predict(tied, x).labels, labels);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index nearest = 0;
    (means.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&nearest);
    EXPECT_EQ(labels[static_cast<std::size_t>(i)], nearest);
  }
}

TEST(Predict, LabelPermutationEquivariance) {
  Matrix means = test::gaussian_matrix(3, 2, 21);
  Vector priors = vec({0.5, 0.2, 0.3});
  const int perm[] = {2, 0, 1};
  Matrix pm(3, 2);
  Vector pp(3);
  for (int c = 0; c < 3; ++c) {
    pm.row(perm[c]) = means.row(c);
    pp(perm[c]) = priors(c);
  }
  auto a = make_gaussian_classifier(means, test::random_spd(2, 1), priors);
  auto b = make_gaussian_classifier(pm, test::random_spd(2, 1), pp);
  Vector x = vec({0.3, -0.7});
  Vector pa = posterior(a, x);
  Vector pb = posterior(b, x);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(pb(perm[c]), pa(c), 1e-12);
}

TEST(Accuracy, Examples) {
  std::vector<int> t{0, 1, 2, 1};
  EXPECT_DOUBLE_EQ(accuracy(t, t), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(std::vector<int>{1, 0, 0, 0}, t), 0.0);
  EXPECT_DOUBLE_EQ(accuracy(std::vector<int>{0, 1, 2, 0}, t), 0.75);
  EXPECT_THROW(accuracy(std::vector<int>{0}, t), DimensionError);
}

TEST(Builders, ParseEstimatorNames) {
  EXPECT_EQ(parse_estimator_kind("mcd"), EstimatorKind::kMcd);
  EXPECT_EQ(parse_estimator_kind("lts-euclid"), EstimatorKind::kLtsEuclid);
  EXPECT_THROW(parse_estimator_kind("mve"), ConfigError);
}

TEST(Builders, AllEstimatorsClassifyCleanData) {
  auto spec = test::tiny_spec(3, 3, 300, 0.0, 30);
  auto train = synthesize(spec).data;
  spec.seed = 31;
  auto test_set = synthesize(spec).data;
  for (auto kind : {EstimatorKind::kSample, EstimatorKind::kMcd, EstimatorKind::kLtsEuclid, EstimatorKind::kTkm}) {
    auto params = fit_classifier(train, kind);
    EXPECT_GT(accuracy(predict(params, test_set.features()).labels, test_set.labels()), 0.9) << to_string(kind);
  }
  EXPECT_EQ(fit_classifier(train, EstimatorKind::kLtsEuclid).kind, CovarianceKind::kIdentity);
}

}  // namespace
}  // namespace rog
