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

#ifndef PREFGAIN_SESSION_H_
#define PREFGAIN_SESSION_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "prefgain/acquisition.h"
#include "prefgain/action_space.h"
#include "prefgain/autorater.h"
#include "prefgain/feedback.h"
#include "prefgain/plant.h"
#include "prefgain/preference_gp.h"
#include "prefgain/session_log.h"
#include "prefgain/synthetic_oracle.h"

namespace prefgain {

enum class FeedbackMode { kPreferences, kPreferencesOrdinals };
enum class FeedbackSource { kHuman, kSynthetic, kAutorater };
enum class Selection { kThompson, kRandom };

struct EpisodeConfig {
  GainProfile profile = GainProfile::kToy;
  GainDefaults defaults;
  PlantConfig plant;
  double duration = 2.0;  // seconds
  ClfController controller = ClfController::kPlus;
};

struct SessionConfig {
  std::vector<DimensionSpec> grid;

  // Kernel lengthscale in normalized coordinates; `lengthscales`, when set,
  // overrides it per dimension.
  double lengthscale = 0.15;
  std::vector<double> lengthscales;
  double signal_variance = 1.0;
  double jitter = 1e-6;
  LikelihoodConfig likelihood;
  LaplaceOptions laplace;

  FeedbackMode mode = FeedbackMode::kPreferencesOrdinals;
  FeedbackSource source = FeedbackSource::kHuman;
  Selection selection = Selection::kThompson;
  // Thompson draws over visited + line (default) or over the line only.
  bool thompson_line_only = false;
  int budget = 100;
  std::uint64_t seed = 0;

  // Synthetic source. An empty optimum is drawn from the seed.
  double correct_prob = 1.0;
  std::vector<int> optimum;

  // Plant episodes for every deployed action. Always on for the autorater.
  bool run_episodes = false;
  EpisodeConfig episode;
  AutoraterConfig autorater;

  bool episodes_enabled() const {
    return run_episodes || source == FeedbackSource::kAutorater;
  }
  KernelConfig Kernel() const;
  // Throws std::invalid_argument.
  void Validate() const;
};

// `base_dir` resolves a relative "grid_file".
SessionConfig SessionConfigFromJson(const nlohmann::json& j,
                                    const std::string& base_dir = "");
nlohmann::json ToJson(const SessionConfig& cfg);
SessionConfig LoadSessionConfig(const std::string& path);

const char* FeedbackModeName(FeedbackMode m);
const char* FeedbackSourceName(FeedbackSource s);
const char* SelectionName(Selection s);

struct HistoryEntry {
  int iteration = 0;
  ActionId deployed = 0;
  ActionId believed_best = 0;
  double believed_best_mean = 0.0;
  Preference preference = Preference::kNone;
  std::optional<int> ordinal;
};

struct SessionState {
  int iteration = 0;  // completed feedback rounds
  bool completed = false;
  CandidateSet candidates;
  FeedbackDataset dataset;
  std::optional<Action> previous;
  Action current;
  std::optional<PosteriorModel> posterior;
  std::optional<Action> believed_best;
  std::vector<HistoryEntry> history;
  std::vector<FeedbackEvent> events;
};

class SessionError : public std::runtime_error {
 public:
  enum class Kind { kCompleted, kMalformed, kStaleToken };
  SessionError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Iteration 0 with the first action drawn uniformly from the grid.
SessionState StartState(const SessionConfig& cfg, const ActionGrid& grid);

// One learning round for the action currently deployed. Pure: the result
// depends only on the arguments. Throws SessionError.
SessionState ApplyFeedback(const SessionConfig& cfg, const ActionGrid& grid,
                           SessionState state, const FeedbackEvent& event);

// The hidden optimum used by the synthetic source.
Action SyntheticOptimum(const SessionConfig& cfg, const ActionGrid& grid);

// A running session: state plus its event log and episode results.
class Session {
 public:
  // Starts a new session. With a non-empty `log_path` the file is replaced
  // and the start record written.
  explicit Session(SessionConfig cfg, const std::string& log_path = "");

  // Rebuilds a session by replaying its log, then keeps appending to it.
  static std::unique_ptr<Session> Resume(const std::string& log_path);

  const SessionConfig& config() const { return cfg_; }
  const ActionGrid& grid() const { return grid_; }
  const SessionState& state() const { return state_; }
  const std::optional<OracleConfig>& oracle() const { return oracle_; }

  // Applies, logs, then publishes. On any error the session is unchanged.
  void Submit(FeedbackEvent event);

  // Feedback from the configured synthetic or autorater source for the
  // current round. Throws SessionError for a human-source session.
  FeedbackEvent AutoFeedback();
  void Step() { Submit(AutoFeedback()); }

  // Episode result for an action, simulating it on first use. Throws
  // std::logic_error when episodes are disabled.
  const EpisodeMetrics& Metrics(const Action& action);
  const EpisodeMetrics* CachedMetrics(ActionId id) const;

  nlohmann::json SummaryJson() const;
  nlohmann::json HistoryJson() const;
  nlohmann::json PosteriorJson() const;
  nlohmann::json ActionJson(const Action& action) const;

 private:
  Session(SessionConfig cfg, ActionGrid grid);
  void PrepareCurrent();
  void Log(const std::string& type, nlohmann::json payload);

  SessionConfig cfg_;
  ActionGrid grid_;
  SessionState state_;
  std::optional<OracleConfig> oracle_;
  std::map<ActionId, EpisodeMetrics> episodes_;
  std::unique_ptr<SessionLog> log_;
};

nlohmann::json ToJson(const EpisodeMetrics& m);
EpisodeMetrics MetricsFromJson(const nlohmann::json& j);

}  // namespace prefgain

#endif  // PREFGAIN_SESSION_H_
