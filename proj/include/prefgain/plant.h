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

#ifndef PREFGAIN_PLANT_H_
#define PREFGAIN_PLANT_H_

#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "prefgain/clf_qp.h"

namespace prefgain {

// Fully actuated planar two-link arm. Angles are measured from the downward
// vertical (q2 relative to link 1), so q = 0 hangs at rest.
struct TwoLinkParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double l1 = 1.0;
  double l2 = 1.0;
  double lc1 = 0.5;  // joint to center of mass
  double lc2 = 0.5;
  double inertia1 = 1.0 / 12.0;  // about the center of mass
  double inertia2 = 1.0 / 12.0;
  double gravity = 9.81;
  double damping = 0.0;  // viscous, per joint

  // Same geometry with every mass and inertia multiplied by `scale`.
  TwoLinkParams ScaledMass(double scale) const;
};

class TwoLinkArm {
 public:
  explicit TwoLinkArm(const TwoLinkParams& params) : params_(params) {}

  const TwoLinkParams& params() const { return params_; }

  Eigen::Matrix2d MassMatrix(const Eigen::Vector2d& q) const;
  // Coriolis, gravity and damping: M qdd + bias = u.
  Eigen::Vector2d Bias(const Eigen::Vector2d& q, const Eigen::Vector2d& qd) const;
  Eigen::Vector2d Acceleration(const Eigen::Vector2d& q,
                               const Eigen::Vector2d& qd,
                               const Eigen::Vector2d& u) const;
  // Kinetic plus potential, with potential zero at the hanging rest pose.
  double Energy(const Eigen::Vector2d& q, const Eigen::Vector2d& qd) const;

 private:
  TwoLinkParams params_;
};

struct PlantState {
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
  Eigen::Vector2d qd = Eigen::Vector2d::Zero();
  double tau = 0.0;  // time into the episode
};

// One fixed RK4 step with the torque held constant.
PlantState Rk4Step(const TwoLinkArm& arm, const PlantState& x,
                   const Eigen::Vector2d& u, double dt);

// Smooth periodic joint reference built from two harmonics:
//   q_d,i(t) = offset_i + a1_i sin(w t + phi_i) + a2_i sin(2 w t + 2 phi_i)
// with w = 2 pi / period.
struct PeriodicReference {
  double period = 1.0;
  Eigen::Vector2d offset{0.3, 0.6};
  Eigen::Vector2d first{0.4, 0.3};
  Eigen::Vector2d second{0.08, 0.1};
  Eigen::Vector2d phase{0.0, 1.0};

  void Evaluate(double t, Eigen::Vector2d& pos, Eigen::Vector2d& vel,
                Eigen::Vector2d& acc) const;
};

// Outputs y = q - q_d(tau) for the model `arm`. lglfy is inv(M), which the
// arm guarantees is invertible; a non-finite or singular value still throws
// std::runtime_error so a broken model cannot silently continue.
OutputTerms OutputDynamics(const PlantState& state, const TwoLinkArm& arm,
                           const PeriodicReference& reference);

// Feedback-linearizing torque for the auxiliary input nu: makes ddot y = nu.
Eigen::Vector2d FeedbackLinearizingTorque(const OutputTerms& terms,
                                          const Eigen::Vector2d& nu);

struct PlantConfig {
  TwoLinkParams plant;
  // The controller's model has every mass scaled by this factor; 1 is exact.
  double model_mass_scale = 1.0;
  PeriodicReference reference;
  Eigen::Vector2d initial_error{0.1, -0.1};
  double control_dt = 1e-3;
  int substeps = 1;  // integration steps per control step
  // Standard deviation of additive noise on measured q (rad) and qd (rad/s).
  double position_noise = 0.0;
  double velocity_noise = 0.0;
  std::uint64_t noise_seed = 0;
  double guard = 1e3;  // ||(q, qd)|| beyond this counts as a fall
};

struct EpisodeMetrics {
  double tracking_rms = 0.0;
  double torque_chatter = 0.0;
  double saturation_frac = 0.0;
  double vdot_violation = 0.0;
  bool failed = false;
  int steps = 0;

  // Worst-case values reported for a failed episode.
  static EpisodeMetrics Failed(int steps);
};

// Closed-loop episode tracking the reference. Deterministic for a fixed
// config (measurement noise is seeded). Throws std::invalid_argument for
// invalid gains or gains whose output count is not 2.
EpisodeMetrics SimulateEpisode(const ClfGains& gains, const PlantConfig& cfg,
                               double duration, ClfController controller);

enum class GainProfile { kAmber, kToy };

// Values the toy profile does not take from the action, plus a symmetric
// torque limit applied to every input of either profile.
struct GainDefaults {
  double epsilon = 0.2;
  double w_vdot = 1.0;
  double torque_limit = std::numeric_limits<double>::infinity();
};

// AMBER: six values -> Q = blkdiag(diag(a1,a2,a2,a1), diag(a3,a4,a4,a3)),
// epsilon = a5, w_vdot = a6, R = I_4.
// Toy: two values -> Q = diag(a1, a1, a2, a2), R = I_2.
// Throws std::invalid_argument on a dimension mismatch.
ClfGains GainsFromAction(const Eigen::VectorXd& values, GainProfile profile,
                         const GainDefaults& defaults = {});

GainProfile ParseGainProfile(const std::string& name);

}  // namespace prefgain

#endif  // PREFGAIN_PLANT_H_
