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
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "prefgain/box_qp.h"
#include "prefgain/care.h"
#include "prefgain/clf_qp.h"
#include "prefgain/grid_config.h"
#include "prefgain/plant.h"
#include "prefgain/random.h"

namespace prefgain {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- CARE ----------------------------------------------------------------

TEST(CareTest, DoubleIntegratorDiag12) {
  Eigen::Matrix2d Q;
  Q << 1, 0, 0, 2;
  ClfCertificate c = SolveCare(Q, Eigen::MatrixXd::Identity(1, 1), 1);
  Eigen::Matrix2d expected;
  expected << 2, 1, 1, 2;
  EXPECT_LT((c.P - expected).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(c.residual, 1e-8);
  EXPECT_LT(CareResidual(Q, Eigen::MatrixXd::Identity(1, 1), expected), 1e-14);
}

TEST(CareTest, DoubleIntegratorIdentity) {
  ClfCertificate c = SolveCare(Eigen::Matrix2d::Identity(),
                               Eigen::MatrixXd::Identity(1, 1), 1);
  EXPECT_NEAR(c.P(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(c.P(1, 1), std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(c.P(0, 0), std::sqrt(3.0), 1e-12);
  // gamma = lambda_min(Q) / lambda_max(P), P eigenvalues sqrt(3) +- 1.
  EXPECT_NEAR(c.gamma, 1.0 / (std::sqrt(3.0) + 1.0), 1e-12);
}

TEST(CareTest, BlockDiagonalOverTwoOutputs) {
  // Ordering (y1, y2, dy1, dy2).
  Eigen::Vector4d q(1.0, 4.0, 2.0, 3.0);
  Eigen::MatrixXd Q = q.asDiagonal();
  Eigen::MatrixXd R = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  ClfCertificate c = SolveCare(Q, R, 2);
  for (int i = 0; i < 2; ++i) {
    Eigen::Matrix2d Qi;
    Qi << q[i], 0, 0, q[2 + i];
    ClfCertificate ci = SolveCare(Qi, R.block(i, i, 1, 1), 1);
    EXPECT_NEAR(c.P(i, i), ci.P(0, 0), 1e-12);
    EXPECT_NEAR(c.P(i, 2 + i), ci.P(0, 1), 1e-12);
    EXPECT_NEAR(c.P(2 + i, 2 + i), ci.P(1, 1), 1e-12);
  }
  EXPECT_EQ(c.P(0, 1), 0.0);
  EXPECT_EQ(c.P(0, 3), 0.0);
  EXPECT_EQ(c.P(2, 3), 0.0);
}

TEST(CareTest, RandomPositiveDefiniteInstances) {
  auto rng = MakeRng({1});
  std::uniform_real_distribution<double> logu(-3.0, 4.0);
  for (int t = 0; t < 100; ++t) {
    const int p = 1 + t % 4;
    Eigen::VectorXd q(2 * p), r(p);
    for (auto& x : q) x = std::pow(10.0, logu(rng));
    for (auto& x : r) x = std::pow(10.0, logu(rng) / 2);
    Eigen::MatrixXd Q = q.asDiagonal(), R = r.asDiagonal();
    ClfCertificate c = SolveCare(Q, R, p);
    const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    EXPECT_LT(CareResidual(Q, R, c.P) / scale, 1e-8) << "instance " << t;
    EXPECT_TRUE(IsPositiveDefinite(c.P));
    EXPECT_GT(c.gamma, 0.0);
  }
}

TEST(CareTest, CouplingTermsAllowed) {
  Eigen::Matrix2d Q;
  Q << 4, 1, 1, 3;
  Eigen::MatrixXd R = Eigen::MatrixXd::Constant(1, 1, 0.5);
  ClfCertificate c = SolveCare(Q, R, 1);
  EXPECT_LT(CareResidual(Q, R, c.P), 1e-12);
  EXPECT_TRUE(IsPositiveDefinite(c.P));
}

TEST(CareTest, RejectsBadInputs) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(1, 1);
  Eigen::Matrix2d notpd;
  notpd << 1, 0, 0, -1;
  EXPECT_THROW(SolveCare(notpd, R, 1), std::invalid_argument);
  EXPECT_THROW(SolveCare(Eigen::Matrix2d::Identity(), -R, 1),
               std::invalid_argument);
  Eigen::MatrixXd cross = Eigen::MatrixXd::Identity(4, 4);
  cross(0, 1) = cross(1, 0) = 0.1;  // couples y1 with y2
  EXPECT_THROW(SolveCare(cross, Eigen::MatrixXd::Identity(2, 2), 2),
               std::invalid_argument);
}

// ---- CLF value -----------------------------------------------------------

ClfCertificate IdentityCert(int p) {
  ClfCertificate c;
  c.num_outputs = p;
  c.P = Eigen::MatrixXd::Identity(2 * p, 2 * p);
  c.gamma = 1.0;
  return c;
}

TEST(ClfValueTest, Examples) {
  ClfCertificate c = IdentityCert(2);
  EXPECT_EQ(ClfValue(Eigen::VectorXd::Zero(4), c, 0.3), 0.0);
  Eigen::VectorXd eta(4);
  eta << 1, 0, 0, 0;
  EXPECT_DOUBLE_EQ(ClfValue(eta, c, 0.5), 4.0);

  ClfCertificate care = SolveCare(Eigen::Vector4d(1, 2, 3, 4).asDiagonal(),
                                  Eigen::MatrixXd::Identity(2, 2), 2);
  eta << 0.3, -0.2, 0.5, 0.1;
  EXPECT_NEAR(ClfValue(eta, care, 1.0), eta.dot(care.P * eta), 1e-14);
}

TEST(ClfValueTest, EpsilonScaling) {
  ClfCertificate c = SolveCare(Eigen::Vector4d(5, 2, 3, 1).asDiagonal(),
                               Eigen::MatrixXd::Identity(2, 2), 2);
  auto rng = MakeRng({2});
  std::normal_distribution<double> n;
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd eta(4);
    for (auto& x : eta) x = n(rng);
    EXPECT_GT(ClfValue(eta, c, 0.4), 0.0);
    const double eps = 0.1 + 0.8 * std::abs(n(rng)) / 4;
    Eigen::VectorXd scaled = eta;
    scaled.head(2) /= eps;
    EXPECT_NEAR(ClfValue(eta, c, eps), scaled.dot(c.P * scaled),
                1e-10 * ClfValue(eta, c, eps));
  }
}

// ---- Output dynamics and feedback linearization --------------------------

TEST(OutputDynamicsTest, FeedbackLinearizationZeroesAcceleration) {
  TwoLinkArm arm(TwoLinkParams{});
  PeriodicReference ref;
  auto rng = MakeRng({3});
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    PlantState x;
    x.q = Eigen::Vector2d(n(rng), n(rng));
    x.qd = Eigen::Vector2d(n(rng), n(rng));
    x.tau = std::abs(n(rng));
    OutputTerms terms = OutputDynamics(x, arm, ref);
    Eigen::Vector2d u =
        FeedbackLinearizingTorque(terms, Eigen::Vector2d::Zero());
    Eigen::Vector2d pos, vel, acc;
    ref.Evaluate(x.tau, pos, vel, acc);
    Eigen::Vector2d ydd = arm.Acceleration(x.q, x.qd, u) - acc;
    EXPECT_LT(ydd.norm(), 1e-10);
    EXPECT_LT((terms.eta.head(2) - (x.q - pos)).norm(), 1e-15);
    EXPECT_LT((terms.eta.tail(2) - (x.qd - vel)).norm(), 1e-15);
  }
}

TEST(PlantTest, MassMatrixSymmetricPositiveDefinite) {
  TwoLinkArm arm(TwoLinkParams{});
  for (double q2 = -3.0; q2 <= 3.0; q2 += 0.25) {
    Eigen::Matrix2d m = arm.MassMatrix(Eigen::Vector2d(0.4, q2));
    EXPECT_EQ(m(0, 1), m(1, 0));
    EXPECT_TRUE(IsPositiveDefinite(m));
  }
}

TEST(PlantTest, EnergyConservedWithoutInput) {
  TwoLinkArm arm(TwoLinkParams{});
  PlantState x;
  x.q = Eigen::Vector2d(0.8, -0.5);
  x.qd = Eigen::Vector2d(0.3, 1.0);
  const double e0 = arm.Energy(x.q, x.qd);
  const double dt = PlantConfig{}.control_dt;
  const int steps =
      static_cast<int>(std::llround(PeriodicReference{}.period / dt));
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    x = Rk4Step(arm, x, Eigen::Vector2d::Zero(), dt);
    worst = std::max(worst, std::abs(arm.Energy(x.q, x.qd) - e0) / e0);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(PlantTest, DampingDissipates) {
  TwoLinkParams p;
  p.damping = 0.5;
  TwoLinkArm arm(p);
  PlantState x;
  x.q = Eigen::Vector2d(0.8, -0.5);
  const double e0 = arm.Energy(x.q, x.qd);
  for (int k = 0; k < 1000; ++k) x = Rk4Step(arm, x, Eigen::Vector2d::Zero(), 1e-3);
  EXPECT_LT(arm.Energy(x.q, x.qd), e0);
}

// ---- Box QP ----------------------------------------------------------------

TEST(BoxQpTest, UnconstrainedMinimizer) {
  BoxQp qp;
  qp.hessian = Eigen::Matrix2d{{4, 1}, {1, 3}};
  qp.linear = Eigen::Vector2d(1, -2);
  qp.lower = Eigen::Vector2d::Constant(-kInf);
  qp.upper = Eigen::Vector2d::Constant(kInf);
  qp.ineq_matrix.resize(0, 2);
  qp.ineq_bound.resize(0);
  BoxQpSolution s = SolveBoxQp(qp);
  Eigen::Vector2d x = -qp.hessian.inverse() * qp.linear;
  EXPECT_LT((s.x - x).norm(), 1e-14);
  EXPECT_EQ(s.bound_state, (std::vector<int>{0, 0}));
}

// Exhaustive grid search over the feasible set as an oracle.
TEST(BoxQpTest, MatchesGridSearch) {
  auto rng = MakeRng({4});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    Eigen::Matrix2d a;
    a << u(rng), u(rng), u(rng), u(rng);
    BoxQp qp;
    qp.hessian = a * a.transpose() + 0.2 * Eigen::Matrix2d::Identity();
    qp.linear = Eigen::Vector2d(3 * u(rng), 3 * u(rng));
    qp.lower = Eigen::Vector2d(-1.0, -0.5 + 0.3 * u(rng));
    qp.upper = Eigen::Vector2d(0.5 + 0.3 * u(rng), 1.0);
    qp.ineq_matrix.resize(1, 2);
    qp.ineq_matrix << u(rng), u(rng);
    qp.ineq_bound.resize(1);
    qp.ineq_bound << 0.2 + 0.2 * u(rng);  // origin stays feasible
    BoxQpSolution s = SolveBoxQp(qp);
    EXPECT_TRUE((s.x.array() >= qp.lower.array() - 1e-12).all());
    EXPECT_TRUE((s.x.array() <= qp.upper.array() + 1e-12).all());
    EXPECT_LE((qp.ineq_matrix * s.x - qp.ineq_bound).maxCoeff(), 1e-9);

    double best = kInf;
    const int n = 800;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        Eigen::Vector2d x(
            qp.lower[0] + (qp.upper[0] - qp.lower[0]) * i / n,
            qp.lower[1] + (qp.upper[1] - qp.lower[1]) * j / n);
        if ((qp.ineq_matrix * x - qp.ineq_bound)[0] > 0) continue;
        best = std::min(best, BoxQpObjective(qp, x));
      }
    }
    EXPECT_LE(s.objective, best + 1e-12);
    EXPECT_GT(s.objective, best - 2e-2);
  }
}

TEST(BoxQpTest, Errors) {
  BoxQp qp;
  qp.hessian = Eigen::MatrixXd::Identity(1, 1);
  qp.linear = Eigen::VectorXd::Zero(1);
  qp.lower = Eigen::VectorXd::Constant(1, 1.0);
  qp.upper = Eigen::VectorXd::Constant(1, 0.0);
  qp.ineq_matrix.resize(0, 1);
  qp.ineq_bound.resize(0);
  EXPECT_THROW(SolveBoxQp(qp), std::invalid_argument);
  qp.upper[0] = 2.0;
  qp.ineq_matrix.resize(1, 1);
  qp.ineq_matrix << 1.0;
  qp.ineq_bound = Eigen::VectorXd::Constant(1, 0.5);  // x <= 0.5 < lower
  EXPECT_THROW(SolveBoxQp(qp), std::runtime_error);
  qp.linear = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(SolveBoxQp(qp), std::invalid_argument);
}

// ---- CLF-QPs ---------------------------------------------------------------

ClfGains TestGains(double w_vdot, double limit = kInf) {
  GainDefaults d;
  d.epsilon = 0.3;
  d.w_vdot = w_vdot;
  d.torque_limit = limit;
  return GainsFromAction(Eigen::Vector2d(50.0, 10.0), GainProfile::kToy, d);
}

OutputTerms RandomTerms(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  OutputTerms t;
  t.lf2y = Eigen::Vector2d(n(rng), n(rng));
  t.lglfy = Eigen::Matrix2d{{1.5 + 0.3 * n(rng), 0.2 * n(rng)},
                            {0.2 * n(rng), 1.0 + 0.2 * n(rng)}};
  t.eta = Eigen::Vector4d(n(rng), n(rng), n(rng), n(rng));
  return t;
}

TEST(ClfQpDeltaTest, InactiveConstraintGivesFeedbackLinearization) {
  auto rng = MakeRng({5});
  ClfGains g = TestGains(1.0);
  ClfCertificate c = SolveCare(g.Q, g.R, 2);
  int checked = 0;
  while (checked < 20) {
    OutputTerms t = RandomTerms(rng);
    Eigen::VectorXd u_fl = FeedbackLinearizingTorque(t, Eigen::Vector2d::Zero());
    ClfTerms clf = ComputeClfTerms(t, c, g.epsilon);
    if (clf.lfv + clf.lgv.dot(u_fl) > -clf.rate * clf.v - 1e-9) continue;
    ClfQpResult r = ClfQpDelta(t, g, c);
    EXPECT_LT((r.u - u_fl).norm(), 1e-10);
    EXPECT_EQ(r.delta, 0.0);
    EXPECT_FALSE(r.clf_constraint_active);
    ++checked;
  }
}

// With the constraint active, in auxiliary coordinates nu = lf2y + A u the
// problem is min |nu|^2 + w delta^2 s.t. c nu - delta = b, with multiplier
// lambda = -2 b / (|c|^2 + 1/w).
TEST(ClfQpDeltaTest, ActiveConstraintMatchesLagrangeSolution) {
  auto rng = MakeRng({6});
  for (double w : {0.3, 1.0, 7.0}) {
    ClfGains g = TestGains(w);
    ClfCertificate c = SolveCare(g.Q, g.R, 2);
    int checked = 0;
    while (checked < 20) {
      OutputTerms t = RandomTerms(rng);
      ClfTerms clf = ComputeClfTerms(t, c, g.epsilon);
      Eigen::Matrix2d a = t.lglfy;
      Eigen::RowVector2d cv = clf.lgv * a.inverse();
      const double b = -clf.lfv - clf.rate * clf.v + cv.dot(t.lf2y);
      if (b >= 0) continue;
      const double lambda = -2.0 * b / (cv.squaredNorm() + 1.0 / w);
      Eigen::Vector2d nu = -0.5 * lambda * cv.transpose();
      const double delta = lambda / (2.0 * w);
      Eigen::Vector2d u = a.inverse() * (nu - t.lf2y);
      ClfQpResult r = ClfQpDelta(t, g, c);
      EXPECT_TRUE(r.clf_constraint_active);
      EXPECT_LT((r.u - u).cwiseAbs().maxCoeff(), 1e-8 * (1 + u.norm()));
      EXPECT_NEAR(r.delta, delta, 1e-8 * (1 + std::abs(delta)));
      ++checked;
    }
  }
}

TEST(ClfQpDeltaTest, RelaxationVanishesAsWeightGrows) {
  auto rng = MakeRng({7});
  ClfCertificate c = SolveCare(TestGains(1.0).Q, TestGains(1.0).R, 2);
  OutputTerms t;
  do {
    t = RandomTerms(rng);
  } while (ClfQpDelta(t, TestGains(1e-3), c).delta <= 0.0);
  double prev = kInf;
  for (double w = 1e-3; w <= 1e9; w *= 10) {
    const double d = ClfQpDelta(t, TestGains(w), c).delta;
    EXPECT_LT(d, prev) << "w = " << w;
    EXPECT_GE(d, 0.0);
    prev = d;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(ClfQpPlusTest, ZeroWeightIsFeedbackLinearization) {
  auto rng = MakeRng({8});
  ClfGains g = TestGains(1.0);
  ClfCertificate c = SolveCare(g.Q, g.R, 2);
  g.w_vdot = 0.0;
  for (int k = 0; k < 20; ++k) {
    OutputTerms t = RandomTerms(rng);
    Eigen::VectorXd u_fl = FeedbackLinearizingTorque(t, Eigen::Vector2d::Zero());
    EXPECT_LT((ClfQpPlus(t, g, c).u - u_fl).norm(), 1e-10);
  }
}

TEST(ClfQpPlusTest, StationarityWithInactiveBounds) {
  auto rng = MakeRng({9});
  for (double w : {0.1, 1.0, 5.0}) {
    ClfGains g = TestGains(w);
    ClfCertificate c = SolveCare(g.Q, g.R, 2);
    for (int k = 0; k < 50; ++k) {
      OutputTerms t = RandomTerms(rng);
      ClfQpResult r = ClfQpPlus(t, g, c);
      ClfTerms clf = ComputeClfTerms(t, c, g.epsilon);
      // d/du of |lf2y + A u|^2 + w (lfv + lgv u).
      Eigen::VectorXd grad = 2.0 * t.lglfy.transpose() * (t.lf2y + t.lglfy * r.u) +
                             w * clf.lgv.transpose();
      EXPECT_LT(grad.norm(), 1e-8);
      EXPECT_FALSE(r.saturated);
    }
  }
}

// m = 1: the box QP is a clamp of the unconstrained minimizer.
TEST(ClfQpPlusTest, ScalarBoxIsClamp) {
  ClfCertificate c = SolveCare(Eigen::Matrix2d{{9, 0}, {0, 2}},
                               Eigen::MatrixXd::Identity(1, 1), 1);
  auto rng = MakeRng({10});
  std::normal_distribution<double> n;
  int clamped = 0;
  for (int k = 0; k < 200; ++k) {
    ClfGains g;
    g.Q = Eigen::Matrix2d{{9, 0}, {0, 2}};
    g.R = Eigen::MatrixXd::Identity(1, 1);
    g.epsilon = 0.5;
    g.w_vdot = 2.0;
    g.u_min = Eigen::VectorXd::Constant(1, -1.0);
    g.u_max = Eigen::VectorXd::Constant(1, 0.7);
    OutputTerms t;
    t.lf2y = Eigen::VectorXd::Constant(1, 2 * n(rng));
    t.lglfy = Eigen::MatrixXd::Constant(1, 1, 0.5 + std::abs(n(rng)));
    t.eta = Eigen::Vector2d(n(rng), n(rng));
    ClfTerms clf = ComputeClfTerms(t, c, g.epsilon);
    const double a = t.lglfy(0, 0);
    const double free = -(2 * a * t.lf2y[0] + g.w_vdot * clf.lgv[0]) / (2 * a * a);
    const double u = ClfQpPlus(t, g, c).u[0];
    if (free <= -1.0 || free >= 0.7) {
      EXPECT_EQ(u, std::clamp(free, -1.0, 0.7));
      ++clamped;
    } else {
      EXPECT_NEAR(u, free, 1e-12 * (1 + std::abs(free)));
    }
  }
  EXPECT_GT(clamped, 20);
}

// Where the delta constraint is slack, both controllers reduce to
// min |ddot y|^2 as the plus weight goes to zero.
TEST(ClfQpTest, ControllersAgreeWhenClfTermVanishes) {
  auto rng = MakeRng({11});
  ClfGains g = TestGains(1.0);
  ClfCertificate c = SolveCare(g.Q, g.R, 2);
  int checked = 0;
  while (checked < 10) {
    OutputTerms t = RandomTerms(rng);
    ClfQpResult d = ClfQpDelta(t, g, c);
    if (d.clf_constraint_active) continue;
    ClfGains plus = g;
    plus.w_vdot = 1e-12;
    EXPECT_LT((ClfQpPlus(t, plus, c).u - d.u).norm(), 1e-9);
    ++checked;
  }
}

TEST(ClfQpTest, OutputSystemConvergesWithinEnvelope) {
  ActionGrid amber = LoadGridConfig(PREFGAIN_CONFIG_DIR "/amber.grid");
  auto rng = MakeRng({12});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> n;
  for (int draw = 0; draw < 3; ++draw) {
    Eigen::VectorXd a(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = amber.dim(i).lower + unit(rng) * (amber.dim(i).upper - amber.dim(i).lower);
    }
    ClfGains g = GainsFromAction(a, GainProfile::kAmber);
    ClfCertificate c = SolveCare(g.Q, g.R, 4);
    Eigen::VectorXd eta(8);
    for (auto& x : eta) x = n(rng);
    const double dt = 1e-3;
    std::vector<double> v =
        SimulateOutputSystem(g, c, eta, 2.0, dt, ClfController::kDelta);
    ASSERT_EQ(v.size(), 2001u);
    for (std::size_t k = 0; k < v.size(); ++k) {
      EXPECT_LE(v[k], v[0] * std::exp(-c.gamma / g.epsilon * k * dt) + 1e-6);
    }
  }
}

// ---- Gains ---------------------------------------------------------------

TEST(GainsTest, AmberLearnedAction) {
  Eigen::VectorXd a(6);
  a << 750, 100, 300, 100, 0.125, 2;
  ClfGains g = GainsFromAction(a, GainProfile::kAmber);
  Eigen::VectorXd expected(8);
  expected << 750, 100, 100, 750, 300, 100, 100, 300;
  EXPECT_EQ(Eigen::MatrixXd(g.Q), Eigen::MatrixXd(expected.asDiagonal()));
  EXPECT_EQ(g.epsilon, 0.125);
  EXPECT_EQ(g.w_vdot, 2.0);
  EXPECT_EQ(g.R, Eigen::MatrixXd::Identity(4, 4));
  EXPECT_NO_THROW(g.Validate());
}

TEST(GainsTest, ToyUnitAction) {
  ClfGains g = GainsFromAction(Eigen::Vector2d(1, 1), GainProfile::kToy);
  EXPECT_EQ(g.Q, Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW(GainsFromAction(Eigen::Vector3d(1, 1, 1), GainProfile::kToy),
               std::invalid_argument);
  EXPECT_THROW(ParseGainProfile("cassie"), std::invalid_argument);
}

TEST(GainsTest, Validate) {
  ClfGains g = GainsFromAction(Eigen::Vector2d(1, 1), GainProfile::kToy);
  g.epsilon = 1.0;
  EXPECT_THROW(g.Validate(), std::invalid_argument);
  g.epsilon = 0.5;
  g.w_vdot = 0.0;
  EXPECT_THROW(g.Validate(), std::invalid_argument);
  g.w_vdot = 1.0;
  g.u_min[0] = g.u_max[0];
  EXPECT_THROW(g.Validate(), std::invalid_argument);
}

// Every action of the AMBER grid gives valid controller parameters.
TEST(GainsTest, AmberGridExhaustive) {
  ActionGrid amber = LoadGridConfig(PREFGAIN_CONFIG_DIR "/amber.grid");
  for (ActionId id = 0; id < amber.cardinality(); ++id) {
    ClfGains g = GainsFromAction(amber.FromId(id).values(), GainProfile::kAmber);
    ASSERT_TRUE(IsPositiveDefinite(g.Q)) << id;
    ASSERT_GT(g.epsilon, 0.0);
    ASSERT_LT(g.epsilon, 1.0);
    ASSERT_GT(g.w_vdot, 0.0);
  }
}

// ---- Episodes ------------------------------------------------------------

// Starting on the reference the output stays at zero in continuous time. With
// torques held over each control step the residual is first order in the
// step, so it must halve when the step halves.
TEST(EpisodeTest, ZeroErrorStaysOnReference) {
  ClfGains g = GainsFromAction(Eigen::Vector2d(100, 20), GainProfile::kToy);
  double prev = 0.0;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    PlantConfig cfg;
    cfg.initial_error = Eigen::Vector2d::Zero();
    cfg.control_dt = dt;
    EpisodeMetrics m = SimulateEpisode(g, cfg, 2.0, ClfController::kPlus);
    EXPECT_FALSE(m.failed);
    EXPECT_EQ(m.saturation_frac, 0.0);
    EXPECT_LT(m.tracking_rms, dt);
    if (prev > 0) EXPECT_NEAR(prev / m.tracking_rms, 2.0, 0.05);
    prev = m.tracking_rms;
  }
  PlantConfig cfg;
  cfg.initial_error = Eigen::Vector2d::Zero();
  EpisodeMetrics d = SimulateEpisode(g, cfg, 2.0, ClfController::kDelta);
  EXPECT_EQ(d.saturation_frac, 0.0);
  EXPECT_LT(d.tracking_rms, 1e-2);
  EXPECT_EQ(SimulateEpisode(g, cfg, 2.0, ClfController::kPlus).steps, 2000);
}

TEST(EpisodeTest, LowTorqueLimitSaturates) {
  PlantConfig cfg;
  GainDefaults d;
  d.torque_limit = 2.0;  // gravity alone needs more than this
  ClfGains g = GainsFromAction(Eigen::Vector2d(100, 20), GainProfile::kToy, d);
  EpisodeMetrics m = SimulateEpisode(g, cfg, 2.0, ClfController::kPlus);
  EXPECT_GT(m.saturation_frac, 0.0);
}

// The delta controller enforces the decrease condition the metric measures.
TEST(EpisodeTest, LargerQDoesNotIncreaseViolation) {
  PlantConfig cfg;
  for (auto a : {Eigen::Vector2d(10, 5), Eigen::Vector2d(100, 20),
                 Eigen::Vector2d(300, 80)}) {
    ClfGains g1 = GainsFromAction(a, GainProfile::kToy);
    ClfGains g2 = GainsFromAction(2.0 * a, GainProfile::kToy);
    const double v1 =
        SimulateEpisode(g1, cfg, 2.0, ClfController::kDelta).vdot_violation;
    const double v2 =
        SimulateEpisode(g2, cfg, 2.0, ClfController::kDelta).vdot_violation;
    EXPECT_LE(v2, v1) << a.transpose();
  }
}

TEST(EpisodeTest, GuardMarksFailure) {
  PlantConfig cfg;
  cfg.guard = 0.5;  // the reference pose alone is outside
  ClfGains g = GainsFromAction(Eigen::Vector2d(100, 20), GainProfile::kToy);
  EpisodeMetrics m = SimulateEpisode(g, cfg, 2.0, ClfController::kPlus);
  EXPECT_TRUE(m.failed);
  EXPECT_EQ(m.tracking_rms, EpisodeMetrics::Failed(0).tracking_rms);
  EXPECT_EQ(m.saturation_frac, 1.0);
}

TEST(EpisodeTest, NoiseIsSeeded) {
  PlantConfig cfg;
  cfg.position_noise = 1e-3;
  cfg.velocity_noise = 1e-2;
  cfg.noise_seed = 5;
  ClfGains g = GainsFromAction(Eigen::Vector2d(100, 20), GainProfile::kToy);
  EpisodeMetrics a = SimulateEpisode(g, cfg, 1.0, ClfController::kPlus);
  EpisodeMetrics b = SimulateEpisode(g, cfg, 1.0, ClfController::kPlus);
  EXPECT_EQ(a.tracking_rms, b.tracking_rms);
  EXPECT_EQ(a.torque_chatter, b.torque_chatter);
  cfg.noise_seed = 6;
  EXPECT_NE(SimulateEpisode(g, cfg, 1.0, ClfController::kPlus).torque_chatter,
            a.torque_chatter);
}

TEST(EpisodeTest, ModelMismatchDegradesTracking) {
  PlantConfig cfg;
  ClfGains g = GainsFromAction(Eigen::Vector2d(100, 20), GainProfile::kToy);
  const double exact = SimulateEpisode(g, cfg, 2.0, ClfController::kPlus).tracking_rms;
  cfg.model_mass_scale = 0.6;
  const double off = SimulateEpisode(g, cfg, 2.0, ClfController::kPlus).tracking_rms;
  EXPECT_GT(off, exact);
}

TEST(EpisodeTest, RejectsWrongOutputCount) {
  Eigen::VectorXd a(6);
  a << 750, 100, 300, 100, 0.125, 2;
  EXPECT_THROW(SimulateEpisode(GainsFromAction(a, GainProfile::kAmber),
                               PlantConfig{}, 1.0, ClfController::kPlus),
               std::invalid_argument);
}

}  // namespace
}  // namespace prefgain
