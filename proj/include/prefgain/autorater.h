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

#ifndef PREFGAIN_AUTORATER_H_
#define PREFGAIN_AUTORATER_H_

#include <array>
#include <random>

#include "prefgain/feedback.h"
#include "prefgain/plant.h"

namespace prefgain {

// Stand-in operator that judges episodes from their metrics.
struct AutoraterConfig {
  // tracking_rms, torque_chatter, saturation_frac, vdot_violation
  std::array<double, 4> weights = {100.0, 1.0, 1.0, 0.0};
  // score >= good_score is "very good", score <= bad_score "very bad".
  double good_score = -4.0;
  double bad_score = -5.0;
};

// -(w . metrics).
double AutoraterScore(const EpisodeMetrics& m, const AutoraterConfig& cfg);

// Prefers the higher score (a failed episode always loses to a completed
// one; equal scores are a fair coin). Without `old_metrics` only the ordinal
// label is produced.
FeedbackEvent PlantAutoraterFeedback(const EpisodeMetrics& new_metrics,
                                     const EpisodeMetrics* old_metrics,
                                     const AutoraterConfig& cfg,
                                     std::mt19937_64& rng);

}  // namespace prefgain

#endif  // PREFGAIN_AUTORATER_H_
