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

#ifndef PREFGAIN_CLF_QP_H_
#define PREFGAIN_CLF_QP_H_

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "prefgain/box_qp.h"
#include "prefgain/care.h"

namespace prefgain {

// Tunable controller parameters.
struct ClfGains {
  Eigen::MatrixXd Q;  // 2p x 2p
  Eigen::MatrixXd R;  // p x p
  double epsilon = 0.5;
  double w_vdot = 1.0;
  Eigen::VectorXd u_min;  // m, may hold -inf
  Eigen::VectorXd u_max;  // m, may hold +inf

  int num_outputs() const { return static_cast<int>(R.rows()); }
  // Throws std::invalid_argument when an invariant fails: Q, R not PD,
  // epsilon outside (0, 1), w_vdot <= 0, or u_min >= u_max somewhere.
  void Validate() const;
};

// Relative-degree-two output terms at one state:
//   ddot y = lf2y + lglfy u,   eta = (y, dot y).
struct OutputTerms {
  Eigen::VectorXd lf2y;
  Eigen::MatrixXd lglfy;
  Eigen::VectorXd eta;
};

// V and its Lie derivatives along the closed-loop output dynamics, so that
// dV/dt = lfv + lgv u.
struct ClfTerms {
  double v = 0.0;
  double lfv = 0.0;
  Eigen::RowVectorXd lgv;
  double rate = 0.0;  // gamma / epsilon
};

ClfTerms ComputeClfTerms(const OutputTerms& terms, const ClfCertificate& cert,
                         double epsilon);

struct ClfQpResult {
  Eigen::VectorXd u;
  double delta = 0.0;
  double objective = 0.0;  // constants included, so it is ||ddot y||^2 + ...
  bool saturated = false;  // some torque sits on a bound
  bool clf_constraint_active = false;
};

// min ||lf2y + lglfy u||^2 + w delta^2
// s.t. lfv + lgv u <= -(gamma/eps) V + delta,  u_min <= u <= u_max.
ClfQpResult ClfQpDelta(const OutputTerms& terms, const ClfGains& gains,
                       const ClfCertificate& cert);

// min ||lf2y + lglfy u||^2 + w (lfv + lgv u)   s.t.  u_min <= u <= u_max.
ClfQpResult ClfQpPlus(const OutputTerms& terms, const ClfGains& gains,
                      const ClfCertificate& cert);

// The box QP each controller solves, exposed for KKT checks.
BoxQp ClfQpDeltaProblem(const OutputTerms& terms, const ClfGains& gains,
                        const ClfCertificate& cert);
BoxQp ClfQpPlusProblem(const OutputTerms& terms, const ClfGains& gains,
                       const ClfCertificate& cert);

enum class ClfController { kDelta, kPlus };

// Closed loop of the pure double-integrator output system (lf2y = 0,
// lglfy = I) under the chosen controller with zero-order hold at `dt` and
// RK4 integration. Returns V at t = 0, dt, 2 dt, ... up to `duration`.
std::vector<double> SimulateOutputSystem(const ClfGains& gains,
                                         const ClfCertificate& cert,
                                         const Eigen::VectorXd& eta0,
                                         double duration, double dt,
                                         ClfController controller);

}  // namespace prefgain

#endif  // PREFGAIN_CLF_QP_H_
