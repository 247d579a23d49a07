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

#ifndef PREFGAIN_BOX_QP_H_
#define PREFGAIN_BOX_QP_H_

#include <vector>

#include <Eigen/Core>

namespace prefgain {

// Small dense strictly convex QP
//
//   minimize    1/2 x' H x + c' x
//   subject to  lower <= x <= upper        (entries may be +-inf)
//               A x <= b                   (a handful of rows)
//
// solved exactly by enumerating active sets: every assignment of each bound
// to {free, at lower, at upper} and each row to {inactive, active}. The
// minimizer restricted to each face is found from its KKT system and the
// feasible candidate with the lowest objective is the global optimum. Cost is
// 3^n 2^k small solves, which is fine for the n <= 4 problems here.
struct BoxQp {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd linear;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::MatrixXd ineq_matrix;  // k x n, k may be 0
  Eigen::VectorXd ineq_bound;
};

struct BoxQpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  // Per variable: -1 at lower bound, +1 at upper bound, 0 free.
  std::vector<int> bound_state;
  std::vector<bool> row_active;
};

// Throws std::invalid_argument on inconsistent shapes or lower > upper and
// std::runtime_error if no feasible point exists.
BoxQpSolution SolveBoxQp(const BoxQp& qp);

double BoxQpObjective(const BoxQp& qp, const Eigen::VectorXd& x);

}  // namespace prefgain

#endif  // PREFGAIN_BOX_QP_H_
