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

#ifndef PREFGAIN_FEEDBACK_H_
#define PREFGAIN_FEEDBACK_H_

#include <optional>
#include <string>

#include "json.hpp"

namespace prefgain {

// Answer to "do you prefer this behavior more or less than the last one".
enum class Preference { kNone, kNew, kOld, kSkip };

// One operator response for the currently deployed action.
struct FeedbackEvent {
  Preference preference = Preference::kNone;
  std::optional<int> ordinal;  // 1 = very bad, 2 = neutral, 3 = very good
  double timestamp = 0.0;      // seconds since the epoch
  std::string note;
  // Iteration the client believes it is answering; used to drop duplicates.
  std::optional<int> token;

  bool IsSkip() const { return preference == Preference::kSkip && !ordinal; }
};

const char* PreferenceName(Preference p);
Preference ParsePreference(const std::string& name);

// Wire format:
//   {"preference": "new" | "old" | "skip" | null,
//    "ordinal": 1..N | null, "timestamp": <s>, "note": "...", "token": <int>}
// FeedbackFromJson throws std::invalid_argument on malformed input, including
// an event with neither a preference nor an ordinal.
nlohmann::json ToJson(const FeedbackEvent& e);
FeedbackEvent FeedbackFromJson(const nlohmann::json& j);

double NowSeconds();

}  // namespace prefgain

#endif  // PREFGAIN_FEEDBACK_H_
