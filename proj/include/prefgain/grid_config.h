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

#ifndef PREFGAIN_GRID_CONFIG_H_
#define PREFGAIN_GRID_CONFIG_H_

#include <string>
#include <string_view>

#include "prefgain/action_space.h"

namespace prefgain {

// Grid files hold one dimension per line:
//
//   # comment
//   <name> = <lower>, <upper>, <count>
//
// Blank lines and everything after '#' are ignored. Names may not contain
// '=' or whitespace. Dimensions keep file order. Errors carry the line number.
ActionGrid ParseGridConfig(std::string_view text);
ActionGrid LoadGridConfig(const std::string& path);

std::string FormatGridConfig(const ActionGrid& grid);

}  // namespace prefgain

#endif  // PREFGAIN_GRID_CONFIG_H_
