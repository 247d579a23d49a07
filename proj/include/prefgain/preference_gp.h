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

#ifndef PREFGAIN_PREFERENCE_GP_H_
#define PREFGAIN_PREFERENCE_GP_H_

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "prefgain/action_space.h"

namespace prefgain {

// Squared-exponential kernel on bound-normalized coordinates.
struct KernelConfig {
  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;  // one per action dimension
  double jitter = 1e-6;

  static KernelConfig Uniform(int num_dims, double lengthscale = 0.15,
                              double signal_variance = 1.0,
                              double jitter = 1e-6);
  void Validate(int num_dims) const;
};

// Link-function noise levels and ordinal thresholds b_0 < ... < b_N with
// b_0 = -inf and b_N = +inf. N = thresholds.size() - 1 categories, labelled
// 1..N from worst to best.
struct LikelihoodConfig {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double pref_noise = 0.2;
  double ordinal_noise = 1.0;
  std::vector<double> thresholds = {-kInf, -1.0, 1.0, kInf};

  int num_categories() const { return static_cast<int>(thresholds.size()) - 1; }
  void Validate() const;
};

struct PreferenceRecord {
  ActionId winner = 0;
  ActionId loser = 0;
};

struct OrdinalRecord {
  ActionId action = 0;
  int label = 0;
};

struct FeedbackDataset {
  std::vector<PreferenceRecord> preferences;
  std::vector<OrdinalRecord> ordinals;

  // Both throw std::invalid_argument on records that violate their invariant.
  void AddPreference(ActionId winner, ActionId loser);
  void AddOrdinal(ActionId action, int label, int num_categories);

  std::size_t size() const { return preferences.size() + ordinals.size(); }
  bool empty() const { return size() == 0; }
};

// Laplace-approximate Gaussian over the latent utilities of `action_ids`.
struct PosteriorModel {
  std::vector<ActionId> action_ids;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  bool converged = false;
  int newton_iterations = 0;
  double gradient_max_norm = 0.0;

  int size() const { return static_cast<int>(action_ids.size()); }
  // Position of `id` in action_ids, or -1.
  int IndexOf(ActionId id) const;
  Eigen::VectorXd StdDev() const;
};

// Thrown when Newton iteration fails to reach the gradient tolerance.
class LaplaceError : public std::runtime_error {
 public:
  LaplaceError(const std::string& what, int iterations, double gradient_norm)
      : std::runtime_error(what),
        iterations_(iterations),
        gradient_norm_(gradient_norm) {}
  int iterations() const { return iterations_; }
  double gradient_norm() const { return gradient_norm_; }

 private:
  int iterations_;
  double gradient_norm_;
};

double Kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
              const KernelConfig& cfg);
double Kernel(const ActionGrid& grid, const Action& a, const Action& b,
              const KernelConfig& cfg);

// Gram matrix plus jitter on the diagonal. Rejects duplicate ids.
Eigen::MatrixXd PriorCovariance(const ActionGrid& grid,
                                std::span<const Action> actions,
                                const KernelConfig& cfg);

// Logistic sigmoid; Link(+inf) = 1, Link(-inf) = 0.
double Link(double x);
// log(Link(x)), accurate for large |x|.
double LogLink(double x);

double PreferenceLikelihood(double f_win, double f_lose, double pref_noise);
double OrdinalLikelihood(double f, int label, const LikelihoodConfig& cfg);

// Value, gradient and Hessian of
//   -log P(D_p | f) - log P(D_o | f) + 1/2 f' inv(Sigma) f
// with constants dropped. f is indexed like the candidate id list.
class NegLogPosterior {
 public:
  struct Evaluation {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
  };

  // Throws std::invalid_argument if the dataset references an id outside
  // `candidates` or Sigma is not positive definite.
  NegLogPosterior(std::span<const ActionId> candidates,
                  const FeedbackDataset& data, const Eigen::MatrixXd& prior_cov,
                  const LikelihoodConfig& cfg);

  int size() const { return static_cast<int>(prior_precision_.rows()); }
  double Value(const Eigen::VectorXd& f) const;
  Evaluation Evaluate(const Eigen::VectorXd& f) const;
  // The likelihood part alone: -log P(D_p | f) - log P(D_o | f).
  Evaluation Likelihood(const Eigen::VectorXd& f) const;
  double LikelihoodValue(const Eigen::VectorXd& f) const;
  double PriorValue(const Eigen::VectorXd& f) const;

  const Eigen::MatrixXd& prior_precision() const { return prior_precision_; }
  // Lower Cholesky factor L of Sigma = L L'.
  const Eigen::MatrixXd& prior_cholesky() const { return prior_cholesky_; }

 private:
  struct Pref {
    int winner;
    int loser;
  };
  struct Ord {
    int index;
    double upper;  // b_r
    double lower;  // b_{r-1}
  };

  std::vector<Pref> prefs_;
  std::vector<Ord> ords_;
  Eigen::MatrixXd prior_precision_;
  Eigen::MatrixXd prior_cholesky_;
  double pref_noise_;
  double ordinal_noise_;
};

struct LaplaceOptions {
  double tolerance = 1e-6;  // on the gradient max-norm
  int max_iterations = 100;
};

// Mode by damped Newton (step halving on the objective), covariance as the
// inverse Hessian at the mode. Iterates in whitened coordinates v = inv(L) f;
// `tolerance` bounds the max-norm of the gradient with respect to v.
PosteriorModel LaplaceFit(std::span<const ActionId> candidates,
                          const Eigen::MatrixXd& prior_cov,
                          const FeedbackDataset& data,
                          const LikelihoodConfig& lcfg,
                          const LaplaceOptions& options = {});

PosteriorModel LaplaceFit(const ActionGrid& grid,
                          std::span<const Action> candidates,
                          const FeedbackDataset& data,
                          const KernelConfig& kcfg,
                          const LikelihoodConfig& lcfg,
                          const LaplaceOptions& options = {});

// One draw from N(mean, covariance). Throws std::runtime_error if the
// covariance cannot be factored even after adding jitter.
Eigen::VectorXd PosteriorSample(const PosteriorModel& model,
                                std::mt19937_64& rng);
Eigen::VectorXd PosteriorSample(const PosteriorModel& model,
                                std::uint64_t seed);

}  // namespace prefgain

#endif  // PREFGAIN_PREFERENCE_GP_H_
