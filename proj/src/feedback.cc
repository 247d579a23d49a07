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

#include "prefgain/feedback.h"

#include <chrono>
#include <stdexcept>

namespace prefgain {

const char* PreferenceName(Preference p) {
  switch (p) {
    case Preference::kNew: return "new";
    case Preference::kOld: return "old";
    case Preference::kSkip: return "skip";
    case Preference::kNone: break;
  }
  return "none";
}

Preference ParsePreference(const std::string& name) {
  if (name == "new") return Preference::kNew;
  if (name == "old") return Preference::kOld;
  if (name == "skip") return Preference::kSkip;
  if (name == "none") return Preference::kNone;
  throw std::invalid_argument("unknown preference '" + name + "'");
}

nlohmann::json ToJson(const FeedbackEvent& e) {
  nlohmann::json j;
  j["preference"] = e.preference == Preference::kNone
                        ? nlohmann::json(nullptr)
                        : nlohmann::json(PreferenceName(e.preference));
  j["ordinal"] = e.ordinal ? nlohmann::json(*e.ordinal) : nlohmann::json(nullptr);
  j["timestamp"] = e.timestamp;
  j["note"] = e.note;
  if (e.token) j["token"] = *e.token;
  return j;
}

FeedbackEvent FeedbackFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("feedback must be an object");
  FeedbackEvent e;
  try {
    if (auto it = j.find("preference"); it != j.end() && !it->is_null()) {
      e.preference = ParsePreference(it->get<std::string>());
    }
    if (auto it = j.find("ordinal"); it != j.end() && !it->is_null()) {
      e.ordinal = it->get<int>();
    }
    if (auto it = j.find("timestamp"); it != j.end() && !it->is_null()) {
      e.timestamp = it->get<double>();
    }
    if (auto it = j.find("note"); it != j.end() && !it->is_null()) {
      e.note = it->get<std::string>();
    }
    if (auto it = j.find("token"); it != j.end() && !it->is_null()) {
      e.token = it->get<int>();
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed feedback: ") + ex.what());
  }
  if (e.preference == Preference::kNone && !e.ordinal) {
    throw std::invalid_argument(
        "feedback needs a preference, an ordinal label, or skip");
  }
  return e;
}

double NowSeconds() {
  using namespace std::chrono;
  return duration<double>(system_clock::now().time_since_epoch()).count();
}

}  // namespace prefgain
