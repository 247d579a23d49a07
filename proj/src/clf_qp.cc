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

#include "prefgain/clf_qp.h"

#include <cmath>
#include <stdexcept>

namespace prefgain {

void ClfGains::Validate() const {
  const int p = num_outputs();
  if (p < 1 || Q.rows() != 2 * p || Q.cols() != 2 * p) {
    throw std::invalid_argument("gains: Q must be 2p x 2p");
  }
  if (!IsPositiveDefinite(Q)) throw std::invalid_argument("gains: Q not PD");
  if (!IsPositiveDefinite(R)) throw std::invalid_argument("gains: R not PD");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("gains: epsilon must lie in (0, 1)");
  }
  if (!(w_vdot > 0.0)) throw std::invalid_argument("gains: w_vdot must be > 0");
  if (u_min.size() != u_max.size() || u_min.size() == 0) {
    throw std::invalid_argument("gains: torque bounds missing");
  }
  if (!(u_min.array() < u_max.array()).all()) {
    throw std::invalid_argument("gains: u_min must be below u_max");
  }
}

ClfTerms ComputeClfTerms(const OutputTerms& terms, const ClfCertificate& cert,
                         double epsilon) {
  const int p = cert.num_outputs;
  if (terms.eta.size() != 2 * p || terms.lf2y.size() != p ||
      terms.lglfy.rows() != p) {
    throw std::invalid_argument("CLF terms: output dimension mismatch");
  }
  Eigen::MatrixXd pe = cert.ScaledP(epsilon);
  Eigen::VectorXd pe_eta = pe * terms.eta;
  // F eta = (dy, 0); G' pe eta = bottom half of pe eta.
  Eigen::VectorXd f_eta = Eigen::VectorXd::Zero(2 * p);
  f_eta.head(p) = terms.eta.tail(p);
  Eigen::RowVectorXd lgv_nu = 2.0 * pe_eta.tail(p).transpose();

  ClfTerms out;
  out.v = terms.eta.dot(pe_eta);
  out.lfv = 2.0 * pe_eta.dot(f_eta) + lgv_nu.dot(terms.lf2y);
  out.lgv = lgv_nu * terms.lglfy;
  out.rate = cert.gamma / epsilon;
  return out;
}

BoxQp ClfQpDeltaProblem(const OutputTerms& terms, const ClfGains& gains,
                        const ClfCertificate& cert) {
  const int m = static_cast<int>(terms.lglfy.cols());
  if (gains.u_min.size() != m || gains.u_max.size() != m) {
    throw std::invalid_argument("CLF-QP: torque bound size mismatch");
  }
  ClfTerms clf = ComputeClfTerms(terms, cert, gains.epsilon);
  const Eigen::MatrixXd& a = terms.lglfy;

  BoxQp qp;
  qp.hessian = Eigen::MatrixXd::Zero(m + 1, m + 1);
  qp.hessian.topLeftCorner(m, m) = 2.0 * a.transpose() * a;
  qp.hessian(m, m) = 2.0 * gains.w_vdot;
  qp.linear = Eigen::VectorXd::Zero(m + 1);
  qp.linear.head(m) = 2.0 * a.transpose() * terms.lf2y;
  const double inf = std::numeric_limits<double>::infinity();
  qp.lower.resize(m + 1);
  qp.upper.resize(m + 1);
  qp.lower << gains.u_min, -inf;
  qp.upper << gains.u_max, inf;
  qp.ineq_matrix.resize(1, m + 1);
  qp.ineq_matrix << clf.lgv, -1.0;
  qp.ineq_bound.resize(1);
  qp.ineq_bound << -clf.lfv - clf.rate * clf.v;
  return qp;
}

BoxQp ClfQpPlusProblem(const OutputTerms& terms, const ClfGains& gains,
                       const ClfCertificate& cert) {
  const int m = static_cast<int>(terms.lglfy.cols());
  if (gains.u_min.size() != m || gains.u_max.size() != m) {
    throw std::invalid_argument("CLF-QP: torque bound size mismatch");
  }
  ClfTerms clf = ComputeClfTerms(terms, cert, gains.epsilon);
  const Eigen::MatrixXd& a = terms.lglfy;

  BoxQp qp;
  qp.hessian = 2.0 * a.transpose() * a;
  qp.linear = 2.0 * a.transpose() * terms.lf2y + gains.w_vdot * clf.lgv.transpose();
  qp.lower = gains.u_min;
  qp.upper = gains.u_max;
  qp.ineq_matrix.resize(0, m);
  qp.ineq_bound.resize(0);
  return qp;
}

namespace {

bool AnySaturated(const BoxQpSolution& sol, int m) {
  for (int i = 0; i < m; ++i) {
    if (sol.bound_state[i] != 0) return true;
  }
  return false;
}

}  // namespace

ClfQpResult ClfQpDelta(const OutputTerms& terms, const ClfGains& gains,
                       const ClfCertificate& cert) {
  const int m = static_cast<int>(terms.lglfy.cols());
  BoxQpSolution sol = SolveBoxQp(ClfQpDeltaProblem(terms, gains, cert));
  ClfQpResult out;
  out.u = sol.x.head(m);
  out.delta = sol.x[m];
  out.objective = sol.objective + terms.lf2y.squaredNorm();
  out.saturated = AnySaturated(sol, m);
  out.clf_constraint_active = sol.row_active[0];
  return out;
}

ClfQpResult ClfQpPlus(const OutputTerms& terms, const ClfGains& gains,
                      const ClfCertificate& cert) {
  const int m = static_cast<int>(terms.lglfy.cols());
  BoxQpSolution sol = SolveBoxQp(ClfQpPlusProblem(terms, gains, cert));
  ClfTerms clf = ComputeClfTerms(terms, cert, gains.epsilon);
  ClfQpResult out;
  out.u = sol.x;
  out.objective =
      sol.objective + terms.lf2y.squaredNorm() + gains.w_vdot * clf.lfv;
  out.saturated = AnySaturated(sol, m);
  return out;
}

std::vector<double> SimulateOutputSystem(const ClfGains& gains,
                                         const ClfCertificate& cert,
                                         const Eigen::VectorXd& eta0,
                                         double duration, double dt,
                                         ClfController controller) {
  const int p = cert.num_outputs;
  if (eta0.size() != 2 * p) {
    throw std::invalid_argument("initial output state has wrong size");
  }
  OutputTerms terms;
  terms.lf2y = Eigen::VectorXd::Zero(p);
  terms.lglfy = Eigen::MatrixXd::Identity(p, p);
  terms.eta = eta0;

  auto deriv = [p](const Eigen::VectorXd& eta, const Eigen::VectorXd& nu) {
    Eigen::VectorXd d(2 * p);
    d.head(p) = eta.tail(p);
    d.tail(p) = nu;
    return d;
  };

  const int steps = static_cast<int>(std::llround(duration / dt));
  std::vector<double> v;
  v.reserve(steps + 1);
  v.push_back(ClfValue(terms.eta, cert, gains.epsilon));
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd nu = controller == ClfController::kDelta
                             ? ClfQpDelta(terms, gains, cert).u
                             : ClfQpPlus(terms, gains, cert).u;
    const Eigen::VectorXd& x = terms.eta;
    Eigen::VectorXd k1 = deriv(x, nu);
    Eigen::VectorXd k2 = deriv(x + 0.5 * dt * k1, nu);
    Eigen::VectorXd k3 = deriv(x + 0.5 * dt * k2, nu);
    Eigen::VectorXd k4 = deriv(x + dt * k3, nu);
    terms.eta = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    v.push_back(ClfValue(terms.eta, cert, gains.epsilon));
  }
  return v;
}

}  // namespace prefgain
