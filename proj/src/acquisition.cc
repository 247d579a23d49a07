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

#include "prefgain/acquisition.h"

#include <stdexcept>
#include <string>

namespace prefgain {

void CandidateSet::AddVisited(const Action& action) {
  if (visited_ids_.insert(action.id()).second) visited_.push_back(action);
}

std::vector<Action> CandidateSet::Union() const {
  std::vector<Action> out = visited_;
  std::unordered_set<ActionId> seen = visited_ids_;
  for (const Action& a : line_) {
    if (seen.insert(a.id()).second) out.push_back(a);
  }
  return out;
}

std::vector<ActionId> CandidateSet::VisitedIds() const {
  std::vector<ActionId> ids;
  ids.reserve(visited_.size());
  for (const Action& a : visited_) ids.push_back(a.id());
  return ids;
}

ActionId ArgmaxLowestId(std::span<const ActionId> ids,
                        const Eigen::VectorXd& values) {
  if (ids.empty() || static_cast<Eigen::Index>(ids.size()) != values.size()) {
    throw std::invalid_argument("argmax over mismatched or empty input");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (values[i] > values[best] ||
        (values[i] == values[best] && ids[i] < ids[best])) {
      best = i;
    }
  }
  return ids[best];
}

ActionId ThompsonSelect(const PosteriorModel& model, std::uint64_t seed,
                        std::span<const ActionId> restrict_to) {
  if (model.size() == 0) throw std::invalid_argument("empty posterior");
  Eigen::VectorXd draw = PosteriorSample(model, seed);
  if (restrict_to.empty()) return ArgmaxLowestId(model.action_ids, draw);

  Eigen::VectorXd sub(restrict_to.size());
  for (std::size_t i = 0; i < restrict_to.size(); ++i) {
    int k = model.IndexOf(restrict_to[i]);
    if (k < 0) throw std::invalid_argument("restricted id not in posterior");
    sub[i] = draw[k];
  }
  return ArgmaxLowestId(restrict_to, sub);
}

ActionId BelievedBest(const PosteriorModel& model,
                      std::span<const ActionId> visited) {
  if (visited.empty()) throw std::invalid_argument("no visited actions");
  Eigen::VectorXd mu(visited.size());
  for (std::size_t i = 0; i < visited.size(); ++i) {
    int k = model.IndexOf(visited[i]);
    if (k < 0) {
      throw std::invalid_argument("visited action " + std::to_string(visited[i]) +
                                  " missing from posterior");
    }
    mu[i] = model.mean[k];
  }
  return ArgmaxLowestId(visited, mu);
}

CandidateSet RefreshCandidates(CandidateSet set, const ActionGrid& grid,
                               const Action& anchor, std::uint64_t seed) {
  set.SetLine(RandomLineSubset(grid, anchor, seed));
  return set;
}

}  // namespace prefgain
