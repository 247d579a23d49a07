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

#include "prefgain/preference_gp.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <Eigen/Cholesky>

#include "prefgain/random.h"

namespace prefgain {
namespace {

// log(1 + e^x) without overflow.
double Softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Link'(x) = Link(x) Link(-x); zero at +-inf.
double LinkDerivative(double x) {
  if (std::isinf(x)) return 0.0;
  return Link(x) * Link(-x);
}

}  // namespace

KernelConfig KernelConfig::Uniform(int num_dims, double lengthscale,
                                   double signal_variance, double jitter) {
  KernelConfig cfg;
  cfg.signal_variance = signal_variance;
  cfg.lengthscales = Eigen::VectorXd::Constant(num_dims, lengthscale);
  cfg.jitter = jitter;
  return cfg;
}

void KernelConfig::Validate(int num_dims) const {
  if (!(signal_variance > 0)) {
    throw std::invalid_argument("kernel signal variance must be positive");
  }
  if (lengthscales.size() != num_dims) {
    throw std::invalid_argument("kernel needs one lengthscale per dimension");
  }
  if (!(lengthscales.array() > 0).all()) {
    throw std::invalid_argument("kernel lengthscales must be positive");
  }
  if (!(jitter >= 0)) throw std::invalid_argument("kernel jitter must be >= 0");
}

void LikelihoodConfig::Validate() const {
  if (!(pref_noise > 0) || !(ordinal_noise > 0)) {
    throw std::invalid_argument("likelihood noise levels must be positive");
  }
  if (thresholds.size() < 2 || thresholds.front() != -kInf ||
      thresholds.back() != kInf) {
    throw std::invalid_argument(
        "ordinal thresholds must start at -inf and end at +inf");
  }
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i - 1] < thresholds[i])) {
      throw std::invalid_argument("ordinal thresholds must increase strictly");
    }
  }
}

void FeedbackDataset::AddPreference(ActionId winner, ActionId loser) {
  if (winner == loser) {
    throw std::invalid_argument("preference between an action and itself");
  }
  preferences.push_back({winner, loser});
}

void FeedbackDataset::AddOrdinal(ActionId action, int label,
                                 int num_categories) {
  if (label < 1 || label > num_categories) {
    throw std::invalid_argument("ordinal label " + std::to_string(label) +
                                " outside 1.." +
                                std::to_string(num_categories));
  }
  ordinals.push_back({action, label});
}

int PosteriorModel::IndexOf(ActionId id) const {
  auto it = std::find(action_ids.begin(), action_ids.end(), id);
  return it == action_ids.end() ? -1
                                : static_cast<int>(it - action_ids.begin());
}

Eigen::VectorXd PosteriorModel::StdDev() const {
  return covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
}

double Kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
              const KernelConfig& cfg) {
  if (x.size() != y.size() || x.size() != cfg.lengthscales.size()) {
    throw std::invalid_argument("kernel dimension mismatch");
  }
  double r2 = ((x - y).array() / cfg.lengthscales.array()).square().sum();
  return cfg.signal_variance * std::exp(-0.5 * r2);
}

double Kernel(const ActionGrid& grid, const Action& a, const Action& b,
              const KernelConfig& cfg) {
  if (a.num_dims() != grid.num_dims() || b.num_dims() != grid.num_dims()) {
    throw std::invalid_argument("kernel dimension mismatch");
  }
  return Kernel(grid.Normalize(a), grid.Normalize(b), cfg);
}

Eigen::MatrixXd PriorCovariance(const ActionGrid& grid,
                                std::span<const Action> actions,
                                const KernelConfig& cfg) {
  if (actions.empty()) {
    throw std::invalid_argument("prior covariance over an empty action set");
  }
  cfg.Validate(grid.num_dims());
  std::unordered_set<ActionId> seen;
  std::vector<Eigen::VectorXd> x;
  x.reserve(actions.size());
  for (const Action& a : actions) {
    if (!seen.insert(a.id()).second) {
      throw std::invalid_argument("duplicate action id " +
                                  std::to_string(a.id()) + " in prior");
    }
    x.push_back(grid.Normalize(a));
  }
  const int n = static_cast<int>(actions.size());
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = cfg.signal_variance + cfg.jitter;
    for (int j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = Kernel(x[i], x[j], cfg);
    }
  }
  return k;
}

double Link(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double LogLink(double x) { return -Softplus(-x); }

double PreferenceLikelihood(double f_win, double f_lose, double pref_noise) {
  return Link((f_win - f_lose) / pref_noise);
}

double OrdinalLikelihood(double f, int label, const LikelihoodConfig& cfg) {
  if (label < 1 || label > cfg.num_categories()) {
    throw std::out_of_range("ordinal label out of range");
  }
  double upper = (cfg.thresholds[label] - f) / cfg.ordinal_noise;
  double lower = (cfg.thresholds[label - 1] - f) / cfg.ordinal_noise;
  // Link(u) - Link(l) = Link(u) Link(-l) (1 - e^(l - u)), cancellation-free.
  return Link(upper) * Link(-lower) * -std::expm1(lower - upper);
}

NegLogPosterior::NegLogPosterior(std::span<const ActionId> candidates,
                                 const FeedbackDataset& data,
                                 const Eigen::MatrixXd& prior_cov,
                                 const LikelihoodConfig& cfg)
    : pref_noise_(cfg.pref_noise), ordinal_noise_(cfg.ordinal_noise) {
  cfg.Validate();
  const int n = static_cast<int>(candidates.size());
  if (prior_cov.rows() != n || prior_cov.cols() != n) {
    throw std::invalid_argument("prior covariance size does not match candidates");
  }
  std::unordered_map<ActionId, int> index;
  for (int i = 0; i < n; ++i) index.emplace(candidates[i], i);
  auto lookup = [&](ActionId id) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw std::invalid_argument("feedback references action " +
                                  std::to_string(id) +
                                  " outside the candidate set");
    }
    return it->second;
  };
  for (const PreferenceRecord& p : data.preferences) {
    prefs_.push_back({lookup(p.winner), lookup(p.loser)});
  }
  for (const OrdinalRecord& o : data.ordinals) {
    if (o.label < 1 || o.label > cfg.num_categories()) {
      throw std::invalid_argument("ordinal label out of range");
    }
    ords_.push_back(
        {lookup(o.action), cfg.thresholds[o.label], cfg.thresholds[o.label - 1]});
  }

  Eigen::LLT<Eigen::MatrixXd> llt(prior_cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("prior covariance is not positive definite");
  }
  prior_cholesky_ = llt.matrixL();
  prior_precision_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
  prior_precision_ = 0.5 * (prior_precision_ + prior_precision_.transpose());
}

double NegLogPosterior::PriorValue(const Eigen::VectorXd& f) const {
  // 1/2 f' inv(L L') f = 1/2 |inv(L) f|^2
  return 0.5 * prior_cholesky_.triangularView<Eigen::Lower>().solve(f)
                   .squaredNorm();
}

double NegLogPosterior::LikelihoodValue(const Eigen::VectorXd& f) const {
  double v = 0.0;
  for (const Pref& p : prefs_) {
    v -= LogLink((f[p.winner] - f[p.loser]) / pref_noise_);
  }
  for (const Ord& o : ords_) {
    double upper = (o.upper - f[o.index]) / ordinal_noise_;
    double lower = (o.lower - f[o.index]) / ordinal_noise_;
    v -= LogLink(upper) + LogLink(-lower) +
         std::log(-std::expm1(lower - upper));
  }
  return v;
}

double NegLogPosterior::Value(const Eigen::VectorXd& f) const {
  return PriorValue(f) + LikelihoodValue(f);
}

NegLogPosterior::Evaluation NegLogPosterior::Likelihood(
    const Eigen::VectorXd& f) const {
  const int n = size();
  Evaluation e;
  e.value = LikelihoodValue(f);
  e.gradient = Eigen::VectorXd::Zero(n);
  e.hessian = Eigen::MatrixXd::Zero(n, n);
  const double cp = pref_noise_;
  for (const Pref& p : prefs_) {
    double x = (f[p.winner] - f[p.loser]) / cp;
    double g = Link(-x) / cp;
    double h = LinkDerivative(x) / (cp * cp);
    e.gradient[p.winner] -= g;
    e.gradient[p.loser] += g;
    e.hessian(p.winner, p.winner) += h;
    e.hessian(p.loser, p.loser) += h;
    e.hessian(p.winner, p.loser) -= h;
    e.hessian(p.loser, p.winner) -= h;
  }
  const double co = ordinal_noise_;
  for (const Ord& o : ords_) {
    double upper = (o.upper - f[o.index]) / co;
    double lower = (o.lower - f[o.index]) / co;
    e.gradient[o.index] += (Link(-upper) - Link(lower)) / co;
    e.hessian(o.index, o.index) +=
        (LinkDerivative(upper) + LinkDerivative(lower)) / (co * co);
  }
  return e;
}

NegLogPosterior::Evaluation NegLogPosterior::Evaluate(
    const Eigen::VectorXd& f) const {
  Evaluation e = Likelihood(f);
  e.value += PriorValue(f);
  e.gradient += prior_precision_ * f;
  e.hessian += prior_precision_;
  return e;
}

PosteriorModel LaplaceFit(std::span<const ActionId> candidates,
                          const Eigen::MatrixXd& prior_cov,
                          const FeedbackDataset& data,
                          const LikelihoodConfig& lcfg,
                          const LaplaceOptions& options) {
  NegLogPosterior objective(candidates, data, prior_cov, lcfg);
  const int n = objective.size();
  const Eigen::MatrixXd& chol = objective.prior_cholesky();
  const auto lower = chol.triangularView<Eigen::Lower>();

  // Newton on whitened latents v with f = L v, Sigma = L L'. The objective
  // 1/2 |v|^2 + nll(L v) has Hessian I + L' W L, which stays well
  // conditioned however close Sigma is to singular.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  auto psi = [&](const Eigen::VectorXd& w) {
    return 0.5 * w.squaredNorm() + objective.LikelihoodValue(lower * w);
  };

  PosteriorModel model;
  model.action_ids.assign(candidates.begin(), candidates.end());
  int iter = 0;
  Eigen::LLT<Eigen::MatrixXd> b_llt;
  for (;; ++iter) {
    const NegLogPosterior::Evaluation lik = objective.Likelihood(f);
    const double value = 0.5 * v.squaredNorm() + lik.value;
    const Eigen::VectorXd grad = v + chol.transpose() * lik.gradient;
    Eigen::MatrixXd b = chol.transpose() * lik.hessian * chol;
    b.diagonal().array() += 1.0;
    b_llt.compute(b);
    if (b_llt.info() != Eigen::Success) {
      throw LaplaceError("negative log posterior Hessian not positive definite",
                         iter, grad.lpNorm<Eigen::Infinity>());
    }
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    model.gradient_max_norm = gnorm;
    if (gnorm < options.tolerance) break;
    if (iter >= options.max_iterations) {
      throw LaplaceError("Laplace fit did not converge in " +
                             std::to_string(iter) + " Newton iterations",
                         iter, gnorm);
    }
    const Eigen::VectorXd step = -b_llt.solve(grad);
    const double slope = grad.dot(step);
    // Below this the objective cannot resolve the predicted decrease, and
    // the quadratic model is exact to rounding: take the Newton step as is.
    const double noise = 1e-13 * (1.0 + std::abs(value));
    Eigen::VectorXd next = v + step;
    if (-slope > noise) {
      double t = 1.0;
      bool accepted = false;
      for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
        next = v + t * step;
        if (psi(next) <= value + 1e-4 * t * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        next = v + step;
        if (psi(next) > value + noise) {
          throw LaplaceError("Laplace line search stalled", iter, gnorm);
        }
      }
    }
    v = std::move(next);
    f = lower * v;
  }

  // inv(inv(Sigma) + W) = L inv(B) L'
  const Eigen::MatrixXd cov = chol * b_llt.solve(chol.transpose());
  model.mean = std::move(f);
  model.covariance = 0.5 * (cov + cov.transpose());
  model.converged = true;
  model.newton_iterations = iter;
  return model;
}

PosteriorModel LaplaceFit(const ActionGrid& grid,
                          std::span<const Action> candidates,
                          const FeedbackDataset& data,
                          const KernelConfig& kcfg,
                          const LikelihoodConfig& lcfg,
                          const LaplaceOptions& options) {
  std::vector<ActionId> ids;
  ids.reserve(candidates.size());
  for (const Action& a : candidates) ids.push_back(a.id());
  return LaplaceFit(ids, PriorCovariance(grid, candidates, kcfg), data, lcfg,
                    options);
}

Eigen::VectorXd PosteriorSample(const PosteriorModel& model,
                                std::mt19937_64& rng) {
  const int n = model.size();
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = normal(rng);

  Eigen::MatrixXd cov = model.covariance;
  double scale = std::max(cov.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  double jitter = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    if (ldlt.info() == Eigen::Success) {
      Eigen::VectorXd d = ldlt.vectorD();
      if (d.minCoeff() >= -1e-12 * scale) {
        Eigen::VectorXd y = ldlt.matrixL() * (d.cwiseMax(0.0).cwiseSqrt().cwiseProduct(z));
        return model.mean + (ldlt.transpositionsP().transpose() * y);
      }
    }
    jitter = jitter == 0.0 ? 1e-12 * scale : jitter * 10.0;
    cov = model.covariance;
    cov.diagonal().array() += jitter;
  }
  throw std::runtime_error("posterior covariance could not be factored");
}

Eigen::VectorXd PosteriorSample(const PosteriorModel& model,
                                std::uint64_t seed) {
  std::mt19937_64 rng = MakeRng({seed, 0x73616d70});
  return PosteriorSample(model, rng);
}

}  // namespace prefgain
