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

#include "prefgain/action_space.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "prefgain/random.h"

namespace prefgain {

ActionGrid::ActionGrid(std::vector<DimensionSpec> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw std::invalid_argument("action grid needs at least one dimension");
  }
  for (const DimensionSpec& d : dims_) {
    if (!(d.lower < d.upper)) {
      throw std::invalid_argument("dimension '" + d.name +
                                  "': lower bound must be below upper bound");
    }
    if (d.count < 2) {
      throw std::invalid_argument("dimension '" + d.name +
                                  "': count must be at least 2");
    }
  }
  strides_.assign(dims_.size(), 1);
  cardinality_ = 1;
  for (int i = num_dims() - 1; i >= 0; --i) {
    strides_[i] = cardinality_;
    if (cardinality_ > std::numeric_limits<ActionId>::max() / dims_[i].count) {
      throw std::invalid_argument("action grid cardinality overflows");
    }
    cardinality_ *= dims_[i].count;
  }
}

double ActionGrid::Value(int dim, int index) const {
  const DimensionSpec& d = dims_[dim];
  if (index == d.count - 1) return d.upper;  // exact endpoint
  return d.lower + index * (d.upper - d.lower) / (d.count - 1);
}

bool ActionGrid::InRange(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != num_dims()) return false;
  for (int i = 0; i < num_dims(); ++i) {
    if (indices[i] < 0 || indices[i] >= dims_[i].count) return false;
  }
  return true;
}

Action ActionGrid::FromIndices(std::span<const int> indices) const {
  if (!InRange(indices)) {
    throw std::out_of_range("grid index out of range");
  }
  Eigen::VectorXd values(num_dims());
  for (int i = 0; i < num_dims(); ++i) values[i] = Value(i, indices[i]);
  return Action(Encode(indices), std::vector<int>(indices.begin(), indices.end()),
                std::move(values));
}

Action ActionGrid::FromId(ActionId id) const {
  std::vector<int> idx = Decode(id);
  return FromIndices(idx);
}

ActionId ActionGrid::Encode(std::span<const int> indices) const {
  if (!InRange(indices)) {
    throw std::out_of_range("grid index out of range");
  }
  ActionId id = 0;
  for (int i = 0; i < num_dims(); ++i) id += strides_[i] * indices[i];
  return id;
}

std::vector<int> ActionGrid::Decode(ActionId id) const {
  if (id < 0 || id >= cardinality_) {
    throw std::out_of_range("action id " + std::to_string(id) +
                            " outside grid");
  }
  std::vector<int> idx(dims_.size());
  for (int i = 0; i < num_dims(); ++i) {
    idx[i] = static_cast<int>(id / strides_[i]);
    id %= strides_[i];
  }
  return idx;
}

bool ActionGrid::Contains(const Action& action) const {
  if (!InRange(action.indices())) return false;
  return Encode(action.indices()) == action.id() &&
         action.values().size() == num_dims();
}

Eigen::VectorXd ActionGrid::Normalize(const Action& action) const {
  Eigen::VectorXd x(num_dims());
  for (int i = 0; i < num_dims(); ++i) {
    x[i] = static_cast<double>(action.indices()[i]) / (dims_[i].count - 1);
  }
  return x;
}

Action ActionGrid::Sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<ActionId> pick(0, cardinality_ - 1);
  return FromId(pick(rng));
}

bool operator==(const ActionGrid& a, const ActionGrid& b) {
  if (a.dims_.size() != b.dims_.size()) return false;
  for (std::size_t i = 0; i < a.dims_.size(); ++i) {
    const DimensionSpec& x = a.dims_[i];
    const DimensionSpec& y = b.dims_[i];
    if (x.name != y.name || x.lower != y.lower || x.upper != y.upper ||
        x.count != y.count) {
      return false;
    }
  }
  return true;
}

std::vector<Action> LineThrough(const ActionGrid& grid, const Action& anchor,
                                std::span<const int> step) {
  if (static_cast<int>(step.size()) != grid.num_dims()) {
    throw std::invalid_argument("line direction has wrong dimensionality");
  }
  if (std::all_of(step.begin(), step.end(), [](int s) { return s == 0; })) {
    throw std::invalid_argument("line direction must be nonzero");
  }
  auto inside = [&](const std::vector<int>& idx) {
    for (int i = 0; i < grid.num_dims(); ++i) {
      if (idx[i] < 0 || idx[i] >= grid.dim(i).count) return false;
    }
    return true;
  };
  // Walk backwards to the first point on the grid, then forwards to the end.
  std::vector<int> idx = anchor.indices();
  while (true) {
    std::vector<int> prev = idx;
    for (int i = 0; i < grid.num_dims(); ++i) prev[i] -= step[i];
    if (!inside(prev)) break;
    idx = std::move(prev);
  }
  std::vector<Action> line;
  while (inside(idx)) {
    line.push_back(grid.FromIndices(idx));
    for (int i = 0; i < grid.num_dims(); ++i) idx[i] += step[i];
  }
  return line;
}

std::vector<int> RandomLineDirection(int num_dims, std::mt19937_64& rng) {
  std::vector<int> step(num_dims, 0);
  std::bernoulli_distribution coin(0.5);
  if (coin(rng)) {
    std::uniform_int_distribution<int> axis(0, num_dims - 1);
    step[axis(rng)] = 1;
    return step;
  }
  std::uniform_int_distribution<int> entry(-1, 1);
  do {
    for (int& s : step) s = entry(rng);
  } while (std::all_of(step.begin(), step.end(), [](int s) { return s == 0; }));
  return step;
}

std::vector<Action> RandomLineSubset(const ActionGrid& grid,
                                     const Action& anchor,
                                     std::uint64_t seed) {
  std::mt19937_64 rng = MakeRng({seed, 0x6c696e65});
  std::vector<int> step = RandomLineDirection(grid.num_dims(), rng);
  return LineThrough(grid, anchor, step);
}

}  // namespace prefgain
