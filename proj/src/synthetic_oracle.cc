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

#include "prefgain/synthetic_oracle.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "prefgain/random.h"

namespace prefgain {

void OracleConfig::Validate(const ActionGrid& grid) const {
  if (!grid.Contains(hidden_optimum)) {
    throw std::invalid_argument("hidden optimum is not on the grid");
  }
  if (!(correct_prob > 0.5 && correct_prob <= 1.0)) {
    throw std::invalid_argument("correct_prob must lie in (0.5, 1]");
  }
  if (!(utility_scale > 0)) {
    throw std::invalid_argument("utility_scale must be positive");
  }
}

OracleConfig OracleConfig::Calibrated(const ActionGrid& grid,
                                      const Action& optimum,
                                      double correct_prob,
                                      const LikelihoodConfig& lcfg) {
  OracleConfig cfg;
  cfg.hidden_optimum = optimum;
  cfg.correct_prob = correct_prob;

  Eigen::VectorXd star = grid.Normalize(optimum);
  double max_sq = 0.0;
  for (int i = 0; i < grid.num_dims(); ++i) {
    double far = std::max(star[i], 1.0 - star[i]);
    max_sq += far * far;
  }
  const double max_distance = std::sqrt(max_sq);

  std::vector<double> distances;
  constexpr ActionId kExactLimit = ActionId{1} << 16;
  if (grid.cardinality() <= kExactLimit) {
    distances.reserve(grid.cardinality());
    for (ActionId id = 0; id < grid.cardinality(); ++id) {
      distances.push_back(NormalizedDistance(grid, grid.FromId(id), optimum));
    }
  } else {
    std::mt19937_64 rng = MakeRng({static_cast<std::uint64_t>(optimum.id()),
                                   0x6d656469616e});
    for (int k = 0; k < 4096; ++k) {
      distances.push_back(NormalizedDistance(grid, grid.Sample(rng), optimum));
    }
  }
  auto mid = distances.begin() + distances.size() / 2;
  std::nth_element(distances.begin(), mid, distances.end());
  cfg.neutral_distance = *mid;

  // Top inner threshold, b_{N-1}.
  const double top = lcfg.thresholds[lcfg.thresholds.size() - 2];
  const double span = cfg.neutral_distance - 0.1 * max_distance;
  cfg.utility_scale = (span > 0 && top > 0) ? top / span : 1.0;
  return cfg;
}

double NormalizedDistance(const ActionGrid& grid, const Action& a,
                          const Action& b) {
  return (grid.Normalize(a) - grid.Normalize(b)).norm();
}

double TrueUtility(const ActionGrid& grid, const Action& a,
                   const OracleConfig& cfg) {
  return -cfg.utility_scale * NormalizedDistance(grid, a, cfg.hidden_optimum);
}

double CalibratedUtility(const ActionGrid& grid, const Action& a,
                         const OracleConfig& cfg) {
  return cfg.utility_scale *
         (cfg.neutral_distance - NormalizedDistance(grid, a, cfg.hidden_optimum));
}

PreferenceRecord SyntheticPreference(const ActionGrid& grid,
                                     const Action& a_new, const Action& a_old,
                                     const OracleConfig& cfg,
                                     std::mt19937_64& rng) {
  if (a_new.id() == a_old.id()) {
    throw std::invalid_argument("preference needs two distinct actions");
  }
  double u_new = TrueUtility(grid, a_new, cfg);
  double u_old = TrueUtility(grid, a_old, cfg);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool new_wins;
  if (u_new == u_old) {
    new_wins = unit(rng) < 0.5;
  } else {
    new_wins = u_new > u_old;
    if (unit(rng) >= cfg.correct_prob) new_wins = !new_wins;
  }
  return new_wins ? PreferenceRecord{a_new.id(), a_old.id()}
                  : PreferenceRecord{a_old.id(), a_new.id()};
}

int CategoryOf(double utility, const LikelihoodConfig& lcfg) {
  const int n = lcfg.num_categories();
  for (int r = 1; r < n; ++r) {
    if (utility < lcfg.thresholds[r]) return r;
  }
  return n;
}

OrdinalRecord SyntheticOrdinal(const ActionGrid& grid, const Action& a,
                               const OracleConfig& cfg,
                               const LikelihoodConfig& lcfg,
                               std::mt19937_64& rng) {
  const int n = lcfg.num_categories();
  int label = CategoryOf(CalibratedUtility(grid, a, cfg), lcfg);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (n > 1 && unit(rng) >= cfg.correct_prob) {
    if (label == n) {
      label = n - 1;
    } else if (label == 1) {
      label = 2;
    } else {
      label += unit(rng) < 0.5 ? -1 : 1;
    }
  }
  return {a.id(), label};
}

}  // namespace prefgain
