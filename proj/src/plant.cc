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

#include "prefgain/plant.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/LU>

#include "prefgain/random.h"

namespace prefgain {

TwoLinkParams TwoLinkParams::ScaledMass(double scale) const {
  TwoLinkParams p = *this;
  p.m1 *= scale;
  p.m2 *= scale;
  p.inertia1 *= scale;
  p.inertia2 *= scale;
  return p;
}

Eigen::Matrix2d TwoLinkArm::MassMatrix(const Eigen::Vector2d& q) const {
  const TwoLinkParams& p = params_;
  const double c2 = std::cos(q[1]);
  Eigen::Matrix2d m;
  m(0, 0) = p.m1 * p.lc1 * p.lc1 + p.inertia1 +
            p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2) +
            p.inertia2;
  m(0, 1) = m(1, 0) = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.inertia2;
  m(1, 1) = p.m2 * p.lc2 * p.lc2 + p.inertia2;
  return m;
}

Eigen::Vector2d TwoLinkArm::Bias(const Eigen::Vector2d& q,
                                 const Eigen::Vector2d& qd) const {
  const TwoLinkParams& p = params_;
  const double h = p.m2 * p.l1 * p.lc2 * std::sin(q[1]);
  const double s1 = std::sin(q[0]);
  const double s12 = std::sin(q[0] + q[1]);
  Eigen::Vector2d b;
  b[0] = -h * (2.0 * qd[0] * qd[1] + qd[1] * qd[1]) +
         p.gravity * (p.m1 * p.lc1 * s1 + p.m2 * (p.l1 * s1 + p.lc2 * s12));
  b[1] = h * qd[0] * qd[0] + p.gravity * p.m2 * p.lc2 * s12;
  return b + p.damping * qd;
}

Eigen::Vector2d TwoLinkArm::Acceleration(const Eigen::Vector2d& q,
                                         const Eigen::Vector2d& qd,
                                         const Eigen::Vector2d& u) const {
  return MassMatrix(q).inverse() * (u - Bias(q, qd));
}

double TwoLinkArm::Energy(const Eigen::Vector2d& q,
                          const Eigen::Vector2d& qd) const {
  const TwoLinkParams& p = params_;
  const double kinetic = 0.5 * qd.dot(MassMatrix(q) * qd);
  const double height = p.m1 * p.lc1 * (1.0 - std::cos(q[0])) +
                        p.m2 * (p.l1 * (1.0 - std::cos(q[0])) +
                                p.lc2 * (1.0 - std::cos(q[0] + q[1])));
  return kinetic + p.gravity * height;
}

PlantState Rk4Step(const TwoLinkArm& arm, const PlantState& x,
                   const Eigen::Vector2d& u, double dt) {
  auto f = [&](const Eigen::Vector2d& q, const Eigen::Vector2d& qd) {
    return arm.Acceleration(q, qd, u);
  };
  const Eigen::Vector2d q1 = x.q, v1 = x.qd;
  const Eigen::Vector2d a1 = f(q1, v1);
  const Eigen::Vector2d q2 = x.q + 0.5 * dt * v1, v2 = x.qd + 0.5 * dt * a1;
  const Eigen::Vector2d a2 = f(q2, v2);
  const Eigen::Vector2d q3 = x.q + 0.5 * dt * v2, v3 = x.qd + 0.5 * dt * a2;
  const Eigen::Vector2d a3 = f(q3, v3);
  const Eigen::Vector2d q4 = x.q + dt * v3, v4 = x.qd + dt * a3;
  const Eigen::Vector2d a4 = f(q4, v4);

  PlantState next;
  next.q = x.q + dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
  next.qd = x.qd + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  next.tau = x.tau + dt;
  return next;
}

void PeriodicReference::Evaluate(double t, Eigen::Vector2d& pos,
                                 Eigen::Vector2d& vel,
                                 Eigen::Vector2d& acc) const {
  const double w = 2.0 * std::numbers::pi / period;
  for (int i = 0; i < 2; ++i) {
    const double a = w * t + phase[i];
    pos[i] = offset[i] + first[i] * std::sin(a) + second[i] * std::sin(2.0 * a);
    vel[i] = w * (first[i] * std::cos(a) + 2.0 * second[i] * std::cos(2.0 * a));
    acc[i] = -w * w * (first[i] * std::sin(a) + 4.0 * second[i] * std::sin(2.0 * a));
  }
}

OutputTerms OutputDynamics(const PlantState& state, const TwoLinkArm& arm,
                           const PeriodicReference& reference) {
  Eigen::Vector2d pos, vel, acc;
  reference.Evaluate(state.tau, pos, vel, acc);
  Eigen::Matrix2d m = arm.MassMatrix(state.q);
  Eigen::FullPivLU<Eigen::Matrix2d> lu(m);
  if (!lu.isInvertible() || !m.allFinite()) {
    throw std::runtime_error("singular decoupling matrix");
  }
  Eigen::Matrix2d m_inv = lu.inverse();

  OutputTerms t;
  t.lglfy = m_inv;
  t.lf2y = -m_inv * arm.Bias(state.q, state.qd) - acc;
  t.eta.resize(4);
  t.eta << state.q - pos, state.qd - vel;
  return t;
}

Eigen::Vector2d FeedbackLinearizingTorque(const OutputTerms& terms,
                                          const Eigen::Vector2d& nu) {
  return terms.lglfy.fullPivLu().solve(nu - terms.lf2y);
}

EpisodeMetrics EpisodeMetrics::Failed(int steps) {
  EpisodeMetrics m;
  m.tracking_rms = 1e6;
  m.torque_chatter = 1e6;
  m.saturation_frac = 1.0;
  m.vdot_violation = 1e6;
  m.failed = true;
  m.steps = steps;
  return m;
}

EpisodeMetrics SimulateEpisode(const ClfGains& gains, const PlantConfig& cfg,
                               double duration, ClfController controller) {
  gains.Validate();
  if (gains.num_outputs() != 2 || gains.u_min.size() != 2) {
    throw std::invalid_argument("two-link episode needs gains for 2 outputs");
  }
  if (!(cfg.control_dt > 0) || cfg.substeps < 1 || !(duration > 0)) {
    throw std::invalid_argument("episode timing must be positive");
  }
  const ClfCertificate cert = SolveCare(gains.Q, gains.R, 2);
  const Eigen::MatrixXd pe = cert.ScaledP(gains.epsilon);
  const double rate = cert.gamma / gains.epsilon;

  const TwoLinkArm truth(cfg.plant);
  const TwoLinkArm model(cfg.plant.ScaledMass(cfg.model_mass_scale));
  std::mt19937_64 rng = MakeRng({cfg.noise_seed, 0x6e6f697365});
  std::normal_distribution<double> normal;

  PlantState x;
  {
    Eigen::Vector2d pos, vel, acc;
    cfg.reference.Evaluate(0.0, pos, vel, acc);
    x.q = pos + cfg.initial_error;
    x.qd = vel;
    x.tau = 0.0;
  }

  const int steps = static_cast<int>(std::llround(duration / cfg.control_dt));
  const double h = cfg.control_dt / cfg.substeps;
  double sq_tracking = 0.0, chatter = 0.0, violation = 0.0;
  int saturated = 0;
  Eigen::Vector2d u_prev = Eigen::Vector2d::Zero();

  for (int k = 0; k < steps; ++k) {
    PlantState measured = x;
    if (cfg.position_noise > 0 || cfg.velocity_noise > 0) {
      for (int i = 0; i < 2; ++i) {
        measured.q[i] += cfg.position_noise * normal(rng);
        measured.qd[i] += cfg.velocity_noise * normal(rng);
      }
    }
    ClfQpResult qp;
    try {
      OutputTerms est = OutputDynamics(measured, model, cfg.reference);
      qp = controller == ClfController::kDelta ? ClfQpDelta(est, gains, cert)
                                               : ClfQpPlus(est, gains, cert);
    } catch (const std::runtime_error&) {
      return EpisodeMetrics::Failed(k);
    }
    const Eigen::Vector2d u = qp.u;
    if (qp.saturated) ++saturated;
    if (k > 0) chatter += (u - u_prev).lpNorm<1>();
    u_prev = u;

    // Metrics from the true state and dynamics.
    OutputTerms actual = OutputDynamics(x, truth, cfg.reference);
    sq_tracking += actual.eta.head(2).squaredNorm();
    Eigen::VectorXd eta_dot(4);
    eta_dot << actual.eta.tail(2), actual.lf2y + actual.lglfy * u;
    const double v = actual.eta.dot(pe * actual.eta);
    const double vdot = 2.0 * actual.eta.dot(pe * eta_dot);
    violation += std::max(0.0, vdot + rate * v);

    for (int s = 0; s < cfg.substeps; ++s) x = Rk4Step(truth, x, u, h);
    const double norm = std::hypot(x.q.norm(), x.qd.norm());
    if (!std::isfinite(norm) || norm > cfg.guard) {
      return EpisodeMetrics::Failed(k + 1);
    }
  }

  EpisodeMetrics out;
  out.steps = steps;
  out.tracking_rms = std::sqrt(sq_tracking / steps);
  out.torque_chatter = steps > 1 ? chatter / (steps - 1) : 0.0;
  out.saturation_frac = static_cast<double>(saturated) / steps;
  out.vdot_violation = violation / steps;
  return out;
}

ClfGains GainsFromAction(const Eigen::VectorXd& values, GainProfile profile,
                         const GainDefaults& defaults) {
  ClfGains g;
  int p = 0;
  switch (profile) {
    case GainProfile::kAmber: {
      if (values.size() != 6) {
        throw std::invalid_argument("AMBER profile needs a 6-dim action");
      }
      p = 4;
      Eigen::VectorXd diag(8);
      diag << values[0], values[1], values[1], values[0],  // position block
          values[2], values[3], values[3], values[2];      // velocity block
      g.Q = diag.asDiagonal();
      g.epsilon = values[4];
      g.w_vdot = values[5];
      break;
    }
    case GainProfile::kToy: {
      if (values.size() != 2) {
        throw std::invalid_argument("toy profile needs a 2-dim action");
      }
      p = 2;
      Eigen::VectorXd diag(4);
      diag << values[0], values[0], values[1], values[1];
      g.Q = diag.asDiagonal();
      g.epsilon = defaults.epsilon;
      g.w_vdot = defaults.w_vdot;
      break;
    }
  }
  g.R = Eigen::MatrixXd::Identity(p, p);
  g.u_min = Eigen::VectorXd::Constant(p, -defaults.torque_limit);
  g.u_max = Eigen::VectorXd::Constant(p, defaults.torque_limit);
  return g;
}

GainProfile ParseGainProfile(const std::string& name) {
  if (name == "amber") return GainProfile::kAmber;
  if (name == "toy") return GainProfile::kToy;
  throw std::invalid_argument("unknown gain profile '" + name + "'");
}

}  // namespace prefgain
