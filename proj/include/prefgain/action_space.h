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

#ifndef PREFGAIN_ACTION_SPACE_H_
#define PREFGAIN_ACTION_SPACE_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace prefgain {

// Mixed-radix encoding of a grid multi-index. Used as the dedup key for
// visited actions and as the reference in every feedback record.
using ActionId = std::int64_t;

// One tunable gain, discretized into `count` evenly spaced values covering
// [lower, upper] inclusive.
struct DimensionSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  int count = 2;
};

// A concrete point of the grid. Only ActionGrid creates these, so the id,
// indices and values are always consistent with each other.
class Action {
 public:
  Action() = default;

  ActionId id() const { return id_; }
  const std::vector<int>& indices() const { return indices_; }
  const Eigen::VectorXd& values() const { return values_; }
  int num_dims() const { return static_cast<int>(indices_.size()); }

  friend bool operator==(const Action& a, const Action& b) {
    return a.id_ == b.id_ && a.indices_ == b.indices_;
  }

 private:
  friend class ActionGrid;
  Action(ActionId id, std::vector<int> indices, Eigen::VectorXd values)
      : id_(id), indices_(std::move(indices)), values_(std::move(values)) {}

  ActionId id_ = 0;
  std::vector<int> indices_;
  Eigen::VectorXd values_;
};

inline ActionId CanonicalId(const Action& action) { return action.id(); }

// The discretized search space. Immutable after construction.
//
// Ids are row-major: the last dimension varies fastest.
class ActionGrid {
 public:
  // Throws std::invalid_argument for an empty spec list, lower >= upper,
  // count < 2, or a cardinality that does not fit in an ActionId.
  explicit ActionGrid(std::vector<DimensionSpec> dims);

  int num_dims() const { return static_cast<int>(dims_.size()); }
  const std::vector<DimensionSpec>& dims() const { return dims_; }
  const DimensionSpec& dim(int i) const { return dims_[i]; }
  ActionId cardinality() const { return cardinality_; }

  double Value(int dim, int index) const;

  // Throws std::out_of_range if any index is outside [0, count).
  Action FromIndices(std::span<const int> indices) const;
  Action FromId(ActionId id) const;

  ActionId Encode(std::span<const int> indices) const;
  std::vector<int> Decode(ActionId id) const;

  bool Contains(const Action& action) const;

  // Coordinates scaled to [0, 1] per dimension by the bounds.
  Eigen::VectorXd Normalize(const Action& action) const;

  Action Sample(std::mt19937_64& rng) const;

  friend bool operator==(const ActionGrid& a, const ActionGrid& b);

 private:
  bool InRange(std::span<const int> indices) const;

  std::vector<DimensionSpec> dims_;
  std::vector<ActionId> strides_;
  ActionId cardinality_ = 1;
};

// All grid points reached from `anchor` by repeatedly adding or subtracting
// `step`, ordered from one end of the line to the other. The anchor is always
// included. `step` must have the grid's dimensionality and at least one
// nonzero entry.
std::vector<Action> LineThrough(const ActionGrid& grid, const Action& anchor,
                                std::span<const int> step);

// Draws a line direction: with probability 1/2 a uniformly chosen coordinate
// axis, otherwise a random vector in {-1, 0, 1}^v with at least one nonzero.
std::vector<int> RandomLineDirection(int num_dims, std::mt19937_64& rng);

// LineThrough() along RandomLineDirection(), seeded.
std::vector<Action> RandomLineSubset(const ActionGrid& grid,
                                     const Action& anchor,
                                     std::uint64_t seed);

}  // namespace prefgain

#endif  // PREFGAIN_ACTION_SPACE_H_
