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

#include "prefgain/box_qp.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

namespace prefgain {

double BoxQpObjective(const BoxQp& qp, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(qp.hessian * x) + qp.linear.dot(x);
}

BoxQpSolution SolveBoxQp(const BoxQp& qp) {
  const int n = static_cast<int>(qp.linear.size());
  const int k = static_cast<int>(qp.ineq_matrix.rows());
  if (qp.hessian.rows() != n || qp.hessian.cols() != n ||
      qp.lower.size() != n || qp.upper.size() != n ||
      (k > 0 && qp.ineq_matrix.cols() != n) || qp.ineq_bound.size() != k) {
    throw std::invalid_argument("box QP shape mismatch");
  }
  if ((qp.lower.array() > qp.upper.array()).any()) {
    throw std::invalid_argument("box QP lower bound above upper bound");
  }

  // Feasibility tolerance relative to problem scale.
  auto tol = [](double v) { return 1e-9 * (1.0 + std::abs(v)); };

  int patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;

  BoxQpSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  bool found = false;

  std::vector<int> state(n);
  for (int p = 0; p < patterns; ++p) {
    int code = p;
    bool skip = false;
    for (int i = 0; i < n; ++i) {
      state[i] = code % 3 - 1;  // -1, 0, +1
      code /= 3;
      if ((state[i] == -1 && !std::isfinite(qp.lower[i])) ||
          (state[i] == 1 && !std::isfinite(qp.upper[i]))) {
        skip = true;
      }
    }
    if (skip) continue;

    std::vector<int> free;
    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (state[i] == 0) {
        free.push_back(i);
      } else {
        fixed[i] = state[i] < 0 ? qp.lower[i] : qp.upper[i];
      }
    }
    const int nf = static_cast<int>(free.size());

    for (int rows = 0; rows < (1 << k); ++rows) {
      std::vector<int> active;
      for (int r = 0; r < k; ++r) {
        if (rows & (1 << r)) active.push_back(r);
      }
      const int na = static_cast<int>(active.size());
      Eigen::VectorXd x = fixed;
      if (nf > 0) {
        // [H_ff A_f'; A_f 0] [x_f; lambda] = [-c_f - H_fb x_b; b - A_b x_b]
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + na, nf + na);
        Eigen::VectorXd rhs(nf + na);
        Eigen::VectorXd hx = qp.hessian * fixed;
        for (int a = 0; a < nf; ++a) {
          for (int b = 0; b < nf; ++b) kkt(a, b) = qp.hessian(free[a], free[b]);
          rhs[a] = -qp.linear[free[a]] - hx[free[a]];
        }
        for (int r = 0; r < na; ++r) {
          double resid = qp.ineq_bound[active[r]];
          for (int i = 0; i < n; ++i) {
            if (state[i] != 0) resid -= qp.ineq_matrix(active[r], i) * fixed[i];
          }
          rhs[nf + r] = resid;
          for (int a = 0; a < nf; ++a) {
            kkt(nf + r, a) = kkt(a, nf + r) = qp.ineq_matrix(active[r], free[a]);
          }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd sol = lu.solve(rhs);
        for (int a = 0; a < nf; ++a) x[free[a]] = sol[a];
      } else if (na > 0) {
        // Fully fixed point; active rows must hold with equality.
        bool ok = true;
        for (int r : active) {
          double lhs = qp.ineq_matrix.row(r).dot(x);
          if (std::abs(lhs - qp.ineq_bound[r]) > tol(qp.ineq_bound[r])) ok = false;
        }
        if (!ok) continue;
      }

      bool feasible = true;
      for (int i = 0; i < n && feasible; ++i) {
        if (x[i] < qp.lower[i] - tol(qp.lower[i]) ||
            x[i] > qp.upper[i] + tol(qp.upper[i]) || !std::isfinite(x[i])) {
          feasible = false;
        }
      }
      for (int r = 0; r < k && feasible; ++r) {
        if (qp.ineq_matrix.row(r).dot(x) > qp.ineq_bound[r] + tol(qp.ineq_bound[r])) {
          feasible = false;
        }
      }
      if (!feasible) continue;

      double obj = BoxQpObjective(qp, x);
      if (!found || obj < best.objective) {
        found = true;
        best.x = x;
        best.objective = obj;
        best.bound_state = state;
        best.row_active.assign(k, false);
        for (int r : active) best.row_active[r] = true;
      }
    }
  }
  if (!found) throw std::runtime_error("box QP is infeasible");
  // Snap to the box so callers can test saturation with ==.
  for (int i = 0; i < n; ++i) {
    if (best.bound_state[i] < 0) best.x[i] = qp.lower[i];
    if (best.bound_state[i] > 0) best.x[i] = qp.upper[i];
  }
  return best;
}

}  // namespace prefgain
