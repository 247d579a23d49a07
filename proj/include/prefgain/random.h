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

#ifndef PREFGAIN_RANDOM_H_
#define PREFGAIN_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace prefgain {

// Builds an engine from a master seed plus any number of stream labels
// (iteration, run index, purpose tag). Equal inputs give equal streams.
inline std::mt19937_64 MakeRng(std::initializer_list<std::uint64_t> words) {
  std::vector<std::uint32_t> seeds;
  seeds.reserve(2 * words.size());
  for (std::uint64_t w : words) {
    seeds.push_back(static_cast<std::uint32_t>(w));
    seeds.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq seq(seeds.begin(), seeds.end());
  return std::mt19937_64(seq);
}

// Derives a child seed; used where an API takes a plain integer seed.
inline std::uint64_t DeriveSeed(std::initializer_list<std::uint64_t> words) {
  return MakeRng(words)();
}

}  // namespace prefgain

#endif  // PREFGAIN_RANDOM_H_
