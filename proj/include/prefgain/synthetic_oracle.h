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

#ifndef PREFGAIN_SYNTHETIC_ORACLE_H_
#define PREFGAIN_SYNTHETIC_ORACLE_H_

#include <random>

#include "prefgain/action_space.h"
#include "prefgain/preference_gp.h"

namespace prefgain {

// Simulated operator whose utility is the negative normalized distance to a
// hidden optimum.
struct OracleConfig {
  Action hidden_optimum;
  double correct_prob = 0.9;
  double utility_scale = 1.0;
  // Distance that maps to calibrated utility 0 (the middle of the ordinal
  // scale). Calibrate() sets it to the grid's median distance.
  double neutral_distance = 0.0;

  void Validate(const ActionGrid& grid) const;

  // Chooses utility_scale and neutral_distance so the median distance from
  // the optimum maps to 0 and 0.1 * max distance maps onto the top inner
  // threshold. The median is exact for grids of up to 2^16 actions and
  // estimated from 4096 seeded samples above that.
  static OracleConfig Calibrated(const ActionGrid& grid, const Action& optimum,
                                 double correct_prob,
                                 const LikelihoodConfig& lcfg);
};

double NormalizedDistance(const ActionGrid& grid, const Action& a,
                          const Action& b);

// -utility_scale * distance(a, optimum); maximal (0) at the optimum.
double TrueUtility(const ActionGrid& grid, const Action& a,
                   const OracleConfig& cfg);

// utility_scale * (neutral_distance - distance), compared to the thresholds.
double CalibratedUtility(const ActionGrid& grid, const Action& a,
                         const OracleConfig& cfg);

// Winner is the truly better action with probability correct_prob. Exact
// ties go either way with probability 1/2.
PreferenceRecord SyntheticPreference(const ActionGrid& grid,
                                     const Action& a_new, const Action& a_old,
                                     const OracleConfig& cfg,
                                     std::mt19937_64& rng);

// Category of the calibrated utility. With probability 1 - correct_prob the
// label moves one category: inward from either end, otherwise up or down with
// equal probability.
OrdinalRecord SyntheticOrdinal(const ActionGrid& grid, const Action& a,
                               const OracleConfig& cfg,
                               const LikelihoodConfig& lcfg,
                               std::mt19937_64& rng);

// Noise-free category of a latent value against the thresholds.
int CategoryOf(double utility, const LikelihoodConfig& lcfg);

}  // namespace prefgain

#endif  // PREFGAIN_SYNTHETIC_ORACLE_H_
