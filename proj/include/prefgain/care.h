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

#ifndef PREFGAIN_CARE_H_
#define PREFGAIN_CARE_H_

#include <Eigen/Core>

namespace prefgain {

// Output coordinates are stacked eta = (y_1..y_p, dy_1..dy_p), so the output
// dynamics under feedback linearization are the block double integrator
//
//   d/dt eta = F eta + G nu,   F = [0 I; 0 0],   G = [0; I].

Eigen::MatrixXd DoubleIntegratorF(int num_outputs);
Eigen::MatrixXd DoubleIntegratorG(int num_outputs);

// Rapidly exponentially stabilizing CLF data for p outputs.
struct ClfCertificate {
  int num_outputs = 0;
  Eigen::MatrixXd P;   // 2p x 2p, solves the Riccati equation
  double gamma = 0.0;  // lambda_min(Q) / lambda_max(P)
  double residual = 0.0;

  // I_eps P I_eps with I_eps = diag(I / eps, I).
  Eigen::MatrixXd ScaledP(double epsilon) const;
};

// Solves F'P + PF - P G inv(R) G' P + Q = 0 for the stabilizing P > 0.
//
// Q may only couple y_i with dy_i (entries (i,i), (i,p+i), (p+i,p+i) and
// the mirror) and R must be diagonal; the equation then splits into p
// independent 2x2 double-integrator problems solved in closed form:
//
//   p12 = sqrt(r q11),  p22 = sqrt(r (q22 + 2 p12)),  p11 = p12 p22 / r - q12.
//
// Throws std::invalid_argument when Q or R is not positive definite or has
// structure outside that pattern.
ClfCertificate SolveCare(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         int num_outputs);

// Frobenius norm of F'P + PF - P G inv(R) G' P + Q.
double CareResidual(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                    const Eigen::MatrixXd& P);

// V(eta) = eta' I_eps P I_eps eta.
double ClfValue(const Eigen::VectorXd& eta, const ClfCertificate& cert,
                double epsilon);

bool IsPositiveDefinite(const Eigen::MatrixXd& m);

}  // namespace prefgain

#endif  // PREFGAIN_CARE_H_
