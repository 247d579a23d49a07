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

#include "prefgain/autorater.h"


namespace prefgain {

double AutoraterScore(const EpisodeMetrics& m, const AutoraterConfig& cfg) {
  return -(cfg.weights[0] * m.tracking_rms + cfg.weights[1] * m.torque_chatter +
           cfg.weights[2] * m.saturation_frac +
           cfg.weights[3] * m.vdot_violation);
}

FeedbackEvent PlantAutoraterFeedback(const EpisodeMetrics& new_metrics,
                                     const EpisodeMetrics* old_metrics,
                                     const AutoraterConfig& cfg,
                                     std::mt19937_64& rng) {
  FeedbackEvent e;
  e.note = "autorater";
  const double s_new = AutoraterScore(new_metrics, cfg);
  if (new_metrics.failed) {
    e.ordinal = 1;
  } else if (s_new >= cfg.good_score) {
    e.ordinal = 3;
  } else if (s_new <= cfg.bad_score) {
    e.ordinal = 1;
  } else {
    e.ordinal = 2;
  }
  if (old_metrics) {
    if (new_metrics.failed != old_metrics->failed) {
      e.preference = new_metrics.failed ? Preference::kOld : Preference::kNew;
    } else {
      const double s_old = AutoraterScore(*old_metrics, cfg);
      if (s_new == s_old) {
        e.preference = std::bernoulli_distribution(0.5)(rng) ? Preference::kNew
                                                             : Preference::kOld;
      } else {
        e.preference = s_new > s_old ? Preference::kNew : Preference::kOld;
      }
    }
  }
  return e;
}

}  // namespace prefgain
