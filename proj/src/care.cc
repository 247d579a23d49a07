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

#include "prefgain/care.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace prefgain {

Eigen::MatrixXd DoubleIntegratorF(int num_outputs) {
  const int p = num_outputs;
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  f.topRightCorner(p, p).setIdentity();
  return f;
}

Eigen::MatrixXd DoubleIntegratorG(int num_outputs) {
  const int p = num_outputs;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * p, p);
  g.bottomRows(p).setIdentity();
  return g;
}

bool IsPositiveDefinite(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if (!m.isApprox(m.transpose(), 1e-12)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

Eigen::MatrixXd ClfCertificate::ScaledP(double epsilon) const {
  const int p = num_outputs;
  Eigen::VectorXd scale(2 * p);
  scale.head(p).setConstant(1.0 / epsilon);
  scale.tail(p).setOnes();
  return scale.asDiagonal() * P * scale.asDiagonal();
}

ClfCertificate SolveCare(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         int num_outputs) {
  const int p = num_outputs;
  if (p < 1 || Q.rows() != 2 * p || Q.cols() != 2 * p || R.rows() != p ||
      R.cols() != p) {
    throw std::invalid_argument("CARE: Q must be 2p x 2p and R p x p");
  }
  if (!IsPositiveDefinite(Q)) throw std::invalid_argument("CARE: Q not PD");
  if (!IsPositiveDefinite(R)) throw std::invalid_argument("CARE: R not PD");
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i != j && R(i, j) != 0.0) {
        throw std::invalid_argument("CARE: R must be diagonal");
      }
    }
  }
  for (int i = 0; i < 2 * p; ++i) {
    for (int j = 0; j < 2 * p; ++j) {
      if (i % p != j % p && Q(i, j) != 0.0) {
        throw std::invalid_argument(
            "CARE: Q may only couple an output with its own derivative");
      }
    }
  }

  ClfCertificate cert;
  cert.num_outputs = p;
  cert.P = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  for (int i = 0; i < p; ++i) {
    const double r = R(i, i);
    const double q11 = Q(i, i);
    const double q12 = Q(i, p + i);
    const double q22 = Q(p + i, p + i);
    const double p12 = std::sqrt(r * q11);
    const double p22 = std::sqrt(r * (q22 + 2.0 * p12));
    const double p11 = p12 * p22 / r - q12;
    cert.P(i, i) = p11;
    cert.P(i, p + i) = cert.P(p + i, i) = p12;
    cert.P(p + i, p + i) = p22;
  }
  if (!IsPositiveDefinite(cert.P)) {
    throw std::invalid_argument("CARE: solution is not positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q_eig(Q, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> p_eig(cert.P,
                                                       Eigen::EigenvaluesOnly);
  cert.gamma = q_eig.eigenvalues().minCoeff() / p_eig.eigenvalues().maxCoeff();
  cert.residual = CareResidual(Q, R, cert.P);
  return cert;
}

double CareResidual(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                    const Eigen::MatrixXd& P) {
  const int p = static_cast<int>(R.rows());
  Eigen::MatrixXd f = DoubleIntegratorF(p);
  Eigen::MatrixXd g = DoubleIntegratorG(p);
  Eigen::MatrixXd r_inv = R.inverse();
  Eigen::MatrixXd res =
      f.transpose() * P + P * f - P * g * r_inv * g.transpose() * P + Q;
  return res.norm();
}

double ClfValue(const Eigen::VectorXd& eta, const ClfCertificate& cert,
                double epsilon) {
  return eta.dot(cert.ScaledP(epsilon) * eta);
}

}  // namespace prefgain
