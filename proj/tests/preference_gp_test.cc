// Copyright 2026 The prefgain Authors.
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


#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "prefgain/preference_gp.h"
#include "prefgain/random.h"

namespace prefgain {
namespace {

using testing::FiniteDifferences;
using testing::GridArgmin;
using testing::RandomGpInstance;
using testing::ReferenceObjective;
using testing::RelativeError;

constexpr double kInf = LikelihoodConfig::kInf;

TEST(KernelTest, ZeroDistanceIsSignalVariance) {
  KernelConfig cfg = KernelConfig::Uniform(2, 0.3, 2.5);
  Eigen::VectorXd x(2);
  x << 0.2, 0.7;
  EXPECT_DOUBLE_EQ(Kernel(x, x, cfg), 2.5);
}

TEST(KernelTest, UnitDistance) {
  KernelConfig cfg = KernelConfig::Uniform(2, 1.0, 1.0);
  Eigen::VectorXd x(2), y(2);
  x << 0.0, 0.0;
  y << 0.6, 0.8;
  EXPECT_NEAR(Kernel(x, y, cfg), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(Kernel(x, y, cfg), 0.6065, 1e-4);
}

TEST(KernelTest, PerDimensionLengthscales) {
  KernelConfig cfg;
  cfg.lengthscales.resize(2);
  cfg.lengthscales << 0.5, 2.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2), y(2);
  y << 0.5, 2.0;
  EXPECT_NEAR(Kernel(x, y, cfg), std::exp(-1.0), 1e-15);
}

TEST(KernelTest, ValidateRejectsBadConfigs) {
  EXPECT_THROW(KernelConfig::Uniform(2, 0.0).Validate(2), std::invalid_argument);
  EXPECT_THROW(KernelConfig::Uniform(2, 0.1, -1.0).Validate(2),
               std::invalid_argument);
  EXPECT_THROW(KernelConfig::Uniform(3).Validate(2), std::invalid_argument);
}

TEST(PriorCovarianceTest, SingleAction) {
  ActionGrid grid({{"x", 0, 1, 3}});
  KernelConfig cfg = KernelConfig::Uniform(1, 0.15, 1.0, 1e-6);
  std::vector<Action> a = {grid.FromId(1)};
  Eigen::MatrixXd k = PriorCovariance(grid, a, cfg);
  ASSERT_EQ(k.rows(), 1);
  EXPECT_DOUBLE_EQ(k(0, 0), 1.0 + 1e-6);
}

TEST(PriorCovarianceTest, RejectsDuplicates) {
  ActionGrid grid({{"x", 0, 1, 3}});
  std::vector<Action> a = {grid.FromId(1), grid.FromId(1)};
  EXPECT_THROW(PriorCovariance(grid, a, KernelConfig::Uniform(1)),
               std::invalid_argument);
}

TEST(PriorCovarianceTest, ThreeActionsFactor) {
  ActionGrid grid({{"x", 0, 1, 8}, {"y", 0, 1, 8}});
  std::vector<Action> a = {grid.FromId(0), grid.FromId(9), grid.FromId(63)};
  Eigen::MatrixXd k = PriorCovariance(grid, a, KernelConfig::Uniform(2));
  EXPECT_TRUE(k.isApprox(k.transpose(), 0.0));
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(k).info(), Eigen::Success);
}

TEST(LinkTest, ClosedForms) {
  EXPECT_EQ(Link(0.0), 0.5);
  EXPECT_NEAR(Link(std::log(3.0)), 0.75, 1e-15);
  EXPECT_EQ(Link(kInf), 1.0);
  EXPECT_EQ(Link(-kInf), 0.0);
  auto rng = MakeRng({1});
  std::normal_distribution<double> n(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    double x = n(rng);
    EXPECT_NEAR(Link(x) + Link(-x), 1.0, 1e-15);
  }
}

TEST(LinkTest, MonotoneIncreasing) {
  double prev = 0.0;
  for (double x = -40; x <= 40; x += 0.01) {
    EXPECT_GE(Link(x), prev);
    prev = Link(x);
  }
}

TEST(LinkTest, LogLinkTails) {
  EXPECT_NEAR(LogLink(-800.0), -800.0, 1e-12);
  EXPECT_NEAR(LogLink(40.0), -std::exp(-40.0), 1e-30);
  EXPECT_NEAR(LogLink(0.3), std::log(Link(0.3)), 1e-15);
}

TEST(PreferenceLikelihoodTest, Examples) {
  EXPECT_EQ(PreferenceLikelihood(0.4, 0.4, 0.2), 0.5);
  const double cp = 0.37;
  EXPECT_NEAR(PreferenceLikelihood(1.0 + cp * std::log(3.0), 1.0, cp), 0.75,
              1e-14);
}

TEST(PreferenceLikelihoodTest, IndicatorLimit) {
  EXPECT_GT(PreferenceLikelihood(0.1, 0.0, 1e-4), 1.0 - 1e-12);
  EXPECT_LT(PreferenceLikelihood(0.0, 0.1, 1e-4), 1e-12);
}

TEST(OrdinalLikelihoodTest, NeutralAtZero) {
  LikelihoodConfig cfg;
  cfg.ordinal_noise = 1.0;
  const double expected = 1.0 / (1.0 + std::exp(-1.0)) -
                          1.0 / (1.0 + std::exp(1.0));
  EXPECT_NEAR(OrdinalLikelihood(0.0, 2, cfg), expected, 1e-15);
  EXPECT_NEAR(OrdinalLikelihood(0.0, 2, cfg), 0.4621, 1e-4);
}

TEST(OrdinalLikelihoodTest, Limits) {
  LikelihoodConfig cfg;
  EXPECT_GT(OrdinalLikelihood(-60.0, 1, cfg), 1.0 - 1e-15);
  EXPECT_GT(OrdinalLikelihood(60.0, 3, cfg), 1.0 - 1e-15);
  EXPECT_THROW(OrdinalLikelihood(0.0, 0, cfg), std::out_of_range);
  EXPECT_THROW(OrdinalLikelihood(0.0, 4, cfg), std::out_of_range);
}

TEST(LikelihoodConfigTest, Validate) {
  LikelihoodConfig cfg;
  cfg.thresholds = {-kInf, 1.0, -1.0, kInf};
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg.thresholds = {-1.0, 1.0, kInf};
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = LikelihoodConfig{};
  cfg.pref_noise = 0.0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(NormalizationTest, RandomizedInputs) {
  auto rng = MakeRng({11});
  std::normal_distribution<double> f(0.0, 3.0);
  std::uniform_real_distribution<double> c(0.01, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = f(rng), b = f(rng), cp = c(rng);
    EXPECT_NEAR(PreferenceLikelihood(a, b, cp) + PreferenceLikelihood(b, a, cp),
                1.0, 1e-12);
    LikelihoodConfig cfg;
    cfg.ordinal_noise = c(rng);
    cfg.thresholds = {-kInf, -1.5, -0.2, 0.4, 2.0, kInf};
    double total = 0.0;
    for (int r = 1; r <= cfg.num_categories(); ++r) {
      total += OrdinalLikelihood(a, r, cfg);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(FeedbackDatasetTest, Invariants) {
  FeedbackDataset d;
  EXPECT_THROW(d.AddPreference(3, 3), std::invalid_argument);
  EXPECT_THROW(d.AddOrdinal(3, 0, 3), std::invalid_argument);
  EXPECT_THROW(d.AddOrdinal(3, 4, 3), std::invalid_argument);
  d.AddPreference(1, 2);
  d.AddOrdinal(1, 3, 3);
  EXPECT_EQ(d.size(), 2u);
}

TEST(NegLogPosteriorTest, PriorOnly) {
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.5, 0.5, 1.0;
  const std::vector<ActionId> ids = {4, 9};
  NegLogPosterior obj(ids, FeedbackDataset{}, cov, LikelihoodConfig{});
  Eigen::VectorXd f(2);
  f << 0.3, -1.2;
  const Eigen::MatrixXd prec = cov.inverse();
  auto e = obj.Evaluate(f);
  EXPECT_NEAR(e.value, 0.5 * f.dot(prec * f), 1e-14);
  EXPECT_TRUE(e.gradient.isApprox(prec * f, 1e-13));
  EXPECT_TRUE(e.hessian.isApprox(prec, 1e-13));
}

TEST(NegLogPosteriorTest, RejectsUnknownIds) {
  FeedbackDataset d;
  d.AddPreference(1, 5);
  const std::vector<ActionId> ids = {1, 2};
  EXPECT_THROW(NegLogPosterior(ids, d, Eigen::MatrixXd::Identity(2, 2),
                               LikelihoodConfig{}),
               std::invalid_argument);
}

TEST(NegLogPosteriorTest, MatchesReferenceObjective) {
  auto rng = MakeRng({5});
  std::normal_distribution<double> normal(0.0, 1.5);
  for (int t = 0; t < 100; ++t) {
    auto g = RandomGpInstance(rng, 6, 8);
    NegLogPosterior obj(g.ids, g.data, g.prior, g.likelihood);
    ReferenceObjective ref(g.ids, g.data, g.prior, g.likelihood);
    Eigen::VectorXd f(g.ids.size());
    for (auto& x : f) x = normal(rng);
    EXPECT_NEAR(obj.Value(f), ref(f), 1e-7 * std::max(1.0, std::abs(ref(f))));
  }
}

// Central differences over random instances: gradient to 1e-5 and Hessian to
// 1e-4 relative, and the Hessian always factors.
TEST(NegLogPosteriorTest, FiniteDifferenceAgreement) {
  auto rng = MakeRng({6});
  std::normal_distribution<double> normal(0.0, 1.5);
  for (int t = 0; t < 200; ++t) {
    auto g = RandomGpInstance(rng, 6, 8);
    NegLogPosterior obj(g.ids, g.data, g.prior, g.likelihood);
    Eigen::VectorXd f(g.ids.size());
    for (auto& x : f) x = normal(rng);
    auto e = obj.Evaluate(f);
    EXPECT_NEAR(e.value, obj.Value(f), 1e-9 * std::max(1.0, std::abs(e.value)));
    Eigen::VectorXd fd_grad;
    Eigen::MatrixXd fd_hess;
    FiniteDifferences(obj, f, 1e-5, fd_grad, fd_hess);
    EXPECT_LT(RelativeError(fd_grad, e.gradient), 1e-5) << "instance " << t;
    EXPECT_LT(RelativeError(fd_hess, e.hessian), 1e-4) << "instance " << t;
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(e.hessian).info(), Eigen::Success);
  }
}

TEST(LaplaceFitTest, NoDataReturnsPrior) {
  ActionGrid grid({{"x", 0, 1, 5}, {"y", 0, 1, 5}});
  std::vector<Action> a = {grid.FromId(0), grid.FromId(7), grid.FromId(24)};
  KernelConfig k = KernelConfig::Uniform(2, 0.4);
  PosteriorModel m = LaplaceFit(grid, a, FeedbackDataset{}, k, LikelihoodConfig{});
  EXPECT_TRUE(m.converged);
  EXPECT_LT(m.mean.cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(m.covariance.isApprox(PriorCovariance(grid, a, k), 1e-10));
}

// Symmetric reduction: with f = (m, -m) the objective is m^2 - log phi(2m),
// minimized where m = 1 - phi(2m). Solved by bisection.
TEST(LaplaceFitTest, TwoActionsOnePreference) {
  auto residual = [](double m) { return m - (1.0 - testing::Sigmoid(2.0 * m)); };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (residual(mid) > 0 ? hi : lo) = mid;
  }
  const double m_star = 0.5 * (lo + hi);

  const std::vector<ActionId> ids = {10, 20};
  FeedbackDataset d;
  d.AddPreference(10, 20);
  LikelihoodConfig lcfg;
  lcfg.pref_noise = 1.0;
  PosteriorModel m = LaplaceFit(ids, Eigen::MatrixXd::Identity(2, 2), d, lcfg);
  ASSERT_TRUE(m.converged);
  EXPECT_GT(m.mean[0], 0.0);
  EXPECT_NEAR(m.mean[0], m_star, 1e-8);
  EXPECT_NEAR(m.mean[1], -m_star, 1e-8);

  d.AddPreference(20, 10);
  PosteriorModel sym =
      LaplaceFit(ids, Eigen::MatrixXd::Identity(2, 2), d, lcfg);
  EXPECT_LT(sym.mean.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LaplaceFitTest, MonotoneEvidence) {
  const std::vector<ActionId> ids = {1, 2};
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.3, 0.3, 1.0;
  FeedbackDataset d;
  double gap = 0.0;
  for (int k = 0; k < 30; ++k) {
    d.AddPreference(1, 2);
    PosteriorModel m = LaplaceFit(ids, cov, d, LikelihoodConfig{});
    ASSERT_TRUE(m.converged);
    const double next = m.mean[0] - m.mean[1];
    EXPECT_GT(next, gap) << "after " << k + 1 << " preferences";
    gap = next;
  }
}

TEST(LaplaceFitTest, MatchesGridSearch) {
  auto rng = MakeRng({8});
  int checked = 0;
  while (checked < 4) {
    auto g = RandomGpInstance(rng, 3, 8);
    if (g.ids.size() < 2) continue;
    PosteriorModel m = LaplaceFit(g.ids, g.prior, g.data, g.likelihood);
    ASSERT_TRUE(m.converged);
    ReferenceObjective ref(g.ids, g.data, g.prior, g.likelihood);
    const int n = static_cast<int>(g.ids.size());
    Eigen::VectorXd brute = GridArgmin(ref, n, -5.0, 5.0, 0.05, 1e-3);
    EXPECT_LT((brute - m.mean).cwiseAbs().maxCoeff(), 2e-3);
    ++checked;
  }
}

TEST(LaplaceFitTest, CovarianceIsInverseHessian) {
  auto rng = MakeRng({9});
  for (int t = 0; t < 50; ++t) {
    auto g = RandomGpInstance(rng, 6, 8);
    PosteriorModel m = LaplaceFit(g.ids, g.prior, g.data, g.likelihood);
    ASSERT_TRUE(m.converged);
    NegLogPosterior obj(g.ids, g.data, g.prior, g.likelihood);
    auto e = obj.Evaluate(m.mean);
    EXPECT_LT(e.gradient.cwiseAbs().maxCoeff(), 1e-4);
    Eigen::MatrixXd prod = m.covariance * e.hessian;
    EXPECT_LT((prod - Eigen::MatrixXd::Identity(m.size(), m.size()))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-6);
    EXPECT_TRUE(m.covariance.isApprox(m.covariance.transpose(), 1e-12));
    EXPECT_GE(m.covariance.diagonal().minCoeff(), 0.0);
  }
}

// Smooth kernels make the explicit prior precision badly conditioned. The
// fit must still converge on a realistic session-sized problem.
TEST(LaplaceFitTest, ConvergesWithLongLengthscales) {
  ActionGrid grid({{"x", 0, 1, 8}, {"y", 0, 1, 8}, {"z", 0, 1, 8}});
  auto rng = MakeRng({10});
  std::vector<Action> a;
  std::vector<ActionId> ids;
  while (a.size() < 40) {
    Action x = grid.Sample(rng);
    if (std::find(ids.begin(), ids.end(), x.id()) != ids.end()) continue;
    a.push_back(x);
    ids.push_back(x.id());
  }
  FeedbackDataset d;
  for (std::size_t i = 1; i < a.size(); ++i) {
    d.AddPreference(ids[i], ids[i - 1]);
    d.AddOrdinal(ids[i], 1 + static_cast<int>(i % 3), 3);
  }
  for (double ls : {0.15, 0.3, 0.5, 0.8}) {
    PosteriorModel m = LaplaceFit(grid, a, d, KernelConfig::Uniform(3, ls),
                                  LikelihoodConfig{});
    EXPECT_TRUE(m.converged) << "lengthscale " << ls;
  }
}

TEST(PosteriorSampleTest, ZeroCovarianceReturnsMean) {
  PosteriorModel m;
  m.action_ids = {1, 2, 3};
  m.mean = Eigen::Vector3d(0.1, 0.7, 0.3);
  m.covariance = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_EQ(PosteriorSample(m, std::uint64_t{4}), m.mean);
}

TEST(PosteriorSampleTest, MomentsMatch) {
  PosteriorModel m;
  m.action_ids = {1, 2};
  m.mean = Eigen::Vector2d(1.0, -2.0);
  m.covariance.resize(2, 2);
  m.covariance << 2.0, 0.8, 0.8, 1.0;
  auto rng = MakeRng({12});
  const int n = 40000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  Eigen::Matrix2d outer = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd s = PosteriorSample(m, rng);
    sum += s;
    Eigen::Vector2d c = s - m.mean;
    outer += c * c.transpose();
  }
  EXPECT_LT((sum / n - m.mean).cwiseAbs().maxCoeff(), 0.04);
  EXPECT_LT((outer / n - m.covariance).cwiseAbs().maxCoeff(), 0.06);
}

TEST(PosteriorSampleTest, SeededDrawsRepeat) {
  PosteriorModel m;
  m.action_ids = {1, 2};
  m.mean = Eigen::Vector2d::Zero();
  m.covariance = Eigen::Matrix2d::Identity();
  EXPECT_EQ(PosteriorSample(m, std::uint64_t{99}),
            PosteriorSample(m, std::uint64_t{99}));
  EXPECT_NE(PosteriorSample(m, std::uint64_t{99}),
            PosteriorSample(m, std::uint64_t{100}));
}

}  // namespace
}  // namespace prefgain
