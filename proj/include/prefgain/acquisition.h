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

#ifndef PREFGAIN_ACQUISITION_H_
#define PREFGAIN_ACQUISITION_H_

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "prefgain/action_space.h"
#include "prefgain/preference_gp.h"

namespace prefgain {

// Actions the posterior is maintained over: everything deployed so far plus
// the current random line. Visited actions keep insertion order.
class CandidateSet {
 public:
  const std::vector<Action>& visited() const { return visited_; }
  const std::vector<Action>& line() const { return line_; }

  bool IsVisited(ActionId id) const { return visited_ids_.contains(id); }
  // No-op if already present.
  void AddVisited(const Action& action);
  void SetLine(std::vector<Action> line) { line_ = std::move(line); }

  // Visited actions first, then line points not already visited.
  std::vector<Action> Union() const;
  std::vector<ActionId> VisitedIds() const;

 private:
  std::vector<Action> visited_;
  std::unordered_set<ActionId> visited_ids_;
  std::vector<Action> line_;
};

// Argmax with ties broken by the lowest id. `ids` and `values` align.
ActionId ArgmaxLowestId(std::span<const ActionId> ids,
                        const Eigen::VectorXd& values);

// Thompson sampling: argmax of one posterior draw. When `restrict_to` is
// nonempty only those ids compete.
ActionId ThompsonSelect(const PosteriorModel& model, std::uint64_t seed,
                        std::span<const ActionId> restrict_to = {});

// argmax of the posterior mean over `visited` only. Every visited id must be
// in the model.
ActionId BelievedBest(const PosteriorModel& model,
                      std::span<const ActionId> visited);

// Replaces the line with a fresh random line through `anchor`.
CandidateSet RefreshCandidates(CandidateSet set, const ActionGrid& grid,
                               const Action& anchor, std::uint64_t seed);

}  // namespace prefgain

#endif  // PREFGAIN_ACQUISITION_H_
