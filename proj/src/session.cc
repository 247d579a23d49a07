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

#include "prefgain/session.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "prefgain/grid_config.h"
#include "prefgain/random.h"

namespace prefgain {
namespace {

using nlohmann::json;

// Stream tags, so every random decision draws from its own stream.
constexpr std::uint64_t kFirstActionTag = 0x6669727374;
constexpr std::uint64_t kOptimumTag = 0x6f7074;
constexpr std::uint64_t kLineTag = 0x6c696e;
constexpr std::uint64_t kThompsonTag = 0x74686f6d;
constexpr std::uint64_t kRandomTag = 0x726e64;
constexpr std::uint64_t kFeedbackTag = 0x666462;

template <typename T>
T Get(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

json GridJson(const std::vector<DimensionSpec>& dims) {
  json out = json::array();
  for (const auto& d : dims) {
    out.push_back({{"name", d.name},
                   {"lower", d.lower},
                   {"upper", d.upper},
                   {"count", d.count}});
  }
  return out;
}

std::vector<DimensionSpec> GridFromJson(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("grid must be an array");
  std::vector<DimensionSpec> dims;
  for (const auto& d : j) {
    DimensionSpec s;
    s.name = d.at("name").get<std::string>();
    s.lower = d.at("lower").get<double>();
    s.upper = d.at("upper").get<double>();
    s.count = d.at("count").get<int>();
    dims.push_back(std::move(s));
  }
  return dims;
}

FeedbackMode ParseMode(const std::string& s) {
  if (s == "pref") return FeedbackMode::kPreferences;
  if (s == "pref+ord") return FeedbackMode::kPreferencesOrdinals;
  throw std::invalid_argument("unknown feedback mode '" + s + "'");
}

FeedbackSource ParseSource(const std::string& s) {
  if (s == "human") return FeedbackSource::kHuman;
  if (s == "synthetic") return FeedbackSource::kSynthetic;
  if (s == "autorater") return FeedbackSource::kAutorater;
  throw std::invalid_argument("unknown feedback source '" + s + "'");
}

Selection ParseSelection(const std::string& s) {
  if (s == "thompson") return Selection::kThompson;
  if (s == "random") return Selection::kRandom;
  throw std::invalid_argument("unknown selection rule '" + s + "'");
}

const char* ControllerName(ClfController c) {
  return c == ClfController::kDelta ? "delta" : "plus";
}

ClfController ParseController(const std::string& s) {
  if (s == "delta") return ClfController::kDelta;
  if (s == "plus") return ClfController::kPlus;
  throw std::invalid_argument("unknown controller '" + s + "'");
}

json NullableDouble(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

const char* FeedbackModeName(FeedbackMode m) {
  return m == FeedbackMode::kPreferences ? "pref" : "pref+ord";
}

const char* FeedbackSourceName(FeedbackSource s) {
  switch (s) {
    case FeedbackSource::kSynthetic: return "synthetic";
    case FeedbackSource::kAutorater: return "autorater";
    case FeedbackSource::kHuman: break;
  }
  return "human";
}

const char* SelectionName(Selection s) {
  return s == Selection::kRandom ? "random" : "thompson";
}

KernelConfig SessionConfig::Kernel() const {
  KernelConfig k = KernelConfig::Uniform(static_cast<int>(grid.size()),
                                         lengthscale, signal_variance, jitter);
  if (!lengthscales.empty()) {
    k.lengthscales = Eigen::Map<const Eigen::VectorXd>(
        lengthscales.data(), static_cast<Eigen::Index>(lengthscales.size()));
  }
  return k;
}

void SessionConfig::Validate() const {
  const ActionGrid g(grid);  // throws on a bad grid
  Kernel().Validate(g.num_dims());
  likelihood.Validate();
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (!(laplace.tolerance > 0) || laplace.max_iterations < 1) {
    throw std::invalid_argument("bad Laplace options");
  }
  if (!(correct_prob >= 0.5 && correct_prob <= 1.0)) {
    throw std::invalid_argument("correct_prob must be in [0.5, 1]");
  }
  if (!optimum.empty()) {
    if (static_cast<int>(optimum.size()) != g.num_dims()) {
      throw std::invalid_argument("optimum has the wrong dimension");
    }
    (void)g.FromIndices(optimum);  // range check
  }
  if (episodes_enabled()) {
    const int expected = episode.profile == GainProfile::kAmber ? 6 : 2;
    if (g.num_dims() != expected) {
      throw std::invalid_argument("gain profile needs a " +
                                  std::to_string(expected) + "-dim grid");
    }
    if (episode.profile != GainProfile::kToy) {
      throw std::invalid_argument(
          "plant episodes need the two-output toy profile");
    }
    if (!(episode.duration > 0)) {
      throw std::invalid_argument("episode duration must be positive");
    }
  }
}

SessionConfig SessionConfigFromJson(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  SessionConfig c;
  try {
    if (j.contains("grid")) {
      c.grid = GridFromJson(j.at("grid"));
    } else if (j.contains("grid_file")) {
      std::filesystem::path p = j.at("grid_file").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      c.grid = LoadGridConfig(p.string()).dims();
    } else {
      throw std::invalid_argument("config needs \"grid\" or \"grid_file\"");
    }

    if (auto k = j.find("kernel"); k != j.end()) {
      if (auto ls = k->find("lengthscale"); ls != k->end()) {
        if (ls->is_array()) {
          c.lengthscales = ls->get<std::vector<double>>();
        } else {
          c.lengthscale = ls->get<double>();
        }
      }
      c.signal_variance = Get(*k, "signal_variance", c.signal_variance);
      c.jitter = Get(*k, "jitter", c.jitter);
    }
    if (auto l = j.find("likelihood"); l != j.end()) {
      c.likelihood.pref_noise = Get(*l, "pref_noise", c.likelihood.pref_noise);
      c.likelihood.ordinal_noise =
          Get(*l, "ordinal_noise", c.likelihood.ordinal_noise);
      if (auto t = l->find("thresholds"); t != l->end()) {
        // Only the finite inner thresholds are written.
        c.likelihood.thresholds = {-LikelihoodConfig::kInf};
        for (double b : t->get<std::vector<double>>()) {
          c.likelihood.thresholds.push_back(b);
        }
        c.likelihood.thresholds.push_back(LikelihoodConfig::kInf);
      }
    }
    if (auto l = j.find("laplace"); l != j.end()) {
      c.laplace.tolerance = Get(*l, "tolerance", c.laplace.tolerance);
      c.laplace.max_iterations =
          Get(*l, "max_iterations", c.laplace.max_iterations);
    }
    c.mode = ParseMode(Get<std::string>(j, "mode", FeedbackModeName(c.mode)));
    c.source =
        ParseSource(Get<std::string>(j, "source", FeedbackSourceName(c.source)));
    c.selection = ParseSelection(
        Get<std::string>(j, "selection", SelectionName(c.selection)));
    const std::string scope = Get<std::string>(j, "thompson_scope", "union");
    if (scope != "union" && scope != "line") {
      throw std::invalid_argument("thompson_scope must be union or line");
    }
    c.thompson_line_only = scope == "line";
    c.budget = Get(j, "budget", c.budget);
    c.seed = Get<std::uint64_t>(j, "seed", c.seed);

    if (auto s = j.find("synthetic"); s != j.end()) {
      c.correct_prob = Get(*s, "correct_prob", c.correct_prob);
      c.optimum = Get(*s, "optimum", c.optimum);
    }
    if (auto e = j.find("episodes"); e != j.end()) {
      EpisodeConfig& ep = c.episode;
      c.run_episodes = Get(*e, "enabled", c.run_episodes);
      ep.profile = ParseGainProfile(Get<std::string>(*e, "profile", "toy"));
      ep.duration = Get(*e, "duration", ep.duration);
      ep.controller =
          ParseController(Get<std::string>(*e, "controller", "plus"));
      ep.defaults.epsilon = Get(*e, "epsilon", ep.defaults.epsilon);
      ep.defaults.w_vdot = Get(*e, "w_vdot", ep.defaults.w_vdot);
      ep.defaults.torque_limit =
          Get(*e, "torque_limit", ep.defaults.torque_limit);
      PlantConfig& p = ep.plant;
      p.model_mass_scale = Get(*e, "model_mass_scale", p.model_mass_scale);
      p.position_noise = Get(*e, "position_noise", p.position_noise);
      p.velocity_noise = Get(*e, "velocity_noise", p.velocity_noise);
      p.noise_seed = Get<std::uint64_t>(*e, "noise_seed", p.noise_seed);
      p.control_dt = Get(*e, "control_dt", p.control_dt);
      p.substeps = Get(*e, "substeps", p.substeps);
      p.plant.damping = Get(*e, "damping", p.plant.damping);
      if (auto ie = e->find("initial_error"); ie != e->end()) {
        auto v = ie->get<std::vector<double>>();
        if (v.size() != 2) {
          throw std::invalid_argument("initial_error needs 2 entries");
        }
        p.initial_error = {v[0], v[1]};
      }
    }
    if (auto a = j.find("autorater"); a != j.end()) {
      if (auto w = a->find("weights"); w != a->end()) {
        auto v = w->get<std::vector<double>>();
        if (v.size() != 4) {
          throw std::invalid_argument("autorater needs 4 weights");
        }
        std::copy(v.begin(), v.end(), c.autorater.weights.begin());
      }
      c.autorater.good_score = Get(*a, "good_score", c.autorater.good_score);
      c.autorater.bad_score = Get(*a, "bad_score", c.autorater.bad_score);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  c.Validate();
  return c;
}

json ToJson(const SessionConfig& c) {
  json j;
  j["grid"] = GridJson(c.grid);
  j["kernel"] = {{"lengthscale", c.lengthscales.empty()
                                     ? json(c.lengthscale)
                                     : json(c.lengthscales)},
                 {"signal_variance", c.signal_variance},
                 {"jitter", c.jitter}};
  const auto& t = c.likelihood.thresholds;
  j["likelihood"] = {
      {"pref_noise", c.likelihood.pref_noise},
      {"ordinal_noise", c.likelihood.ordinal_noise},
      {"thresholds", std::vector<double>(t.begin() + 1, t.end() - 1)}};
  j["laplace"] = {{"tolerance", c.laplace.tolerance},
                  {"max_iterations", c.laplace.max_iterations}};
  j["mode"] = FeedbackModeName(c.mode);
  j["source"] = FeedbackSourceName(c.source);
  j["selection"] = SelectionName(c.selection);
  j["thompson_scope"] = c.thompson_line_only ? "line" : "union";
  j["budget"] = c.budget;
  j["seed"] = c.seed;
  j["synthetic"] = {{"correct_prob", c.correct_prob}, {"optimum", c.optimum}};
  const EpisodeConfig& ep = c.episode;
  const PlantConfig& p = ep.plant;
  j["episodes"] = {
      {"enabled", c.run_episodes},
      {"profile", ep.profile == GainProfile::kAmber ? "amber" : "toy"},
      {"duration", ep.duration},
      {"controller", ControllerName(ep.controller)},
      {"epsilon", ep.defaults.epsilon},
      {"w_vdot", ep.defaults.w_vdot},
      {"torque_limit", NullableDouble(ep.defaults.torque_limit)},
      {"model_mass_scale", p.model_mass_scale},
      {"position_noise", p.position_noise},
      {"velocity_noise", p.velocity_noise},
      {"noise_seed", p.noise_seed},
      {"control_dt", p.control_dt},
      {"substeps", p.substeps},
      {"damping", p.plant.damping},
      {"initial_error", {p.initial_error[0], p.initial_error[1]}}};
  j["autorater"] = {{"weights", c.autorater.weights},
                    {"good_score", c.autorater.good_score},
                    {"bad_score", c.autorater.bad_score}};
  return j;
}

SessionConfig LoadSessionConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw std::invalid_argument(path + ": not valid JSON");
  }
  return SessionConfigFromJson(
      j, std::filesystem::path(path).parent_path().string());
}

json ToJson(const EpisodeMetrics& m) {
  return {{"tracking_rms", m.tracking_rms},
          {"torque_chatter", m.torque_chatter},
          {"saturation_frac", m.saturation_frac},
          {"vdot_violation", m.vdot_violation},
          {"failed", m.failed},
          {"steps", m.steps}};
}

EpisodeMetrics MetricsFromJson(const json& j) {
  EpisodeMetrics m;
  m.tracking_rms = j.at("tracking_rms").get<double>();
  m.torque_chatter = j.at("torque_chatter").get<double>();
  m.saturation_frac = j.at("saturation_frac").get<double>();
  m.vdot_violation = j.at("vdot_violation").get<double>();
  m.failed = j.at("failed").get<bool>();
  m.steps = j.at("steps").get<int>();
  return m;
}

SessionState StartState(const SessionConfig& cfg, const ActionGrid& grid) {
  SessionState s;
  std::mt19937_64 rng = MakeRng({cfg.seed, kFirstActionTag});
  s.current = grid.Sample(rng);
  return s;
}

Action SyntheticOptimum(const SessionConfig& cfg, const ActionGrid& grid) {
  if (!cfg.optimum.empty()) return grid.FromIndices(cfg.optimum);
  std::mt19937_64 rng = MakeRng({cfg.seed, kOptimumTag});
  return grid.Sample(rng);
}

SessionState ApplyFeedback(const SessionConfig& cfg, const ActionGrid& grid,
                           SessionState s, const FeedbackEvent& e) {
  using Kind = SessionError::Kind;
  if (s.completed) {
    throw SessionError(Kind::kCompleted, "session is complete");
  }
  if (e.preference == Preference::kNone && !e.ordinal) {
    throw SessionError(Kind::kMalformed,
                       "feedback needs a preference, an ordinal label, or skip");
  }
  const int n_cat = cfg.likelihood.num_categories();
  if (e.ordinal && (*e.ordinal < 1 || *e.ordinal > n_cat)) {
    throw SessionError(Kind::kMalformed, "ordinal label must be in [1, " +
                                             std::to_string(n_cat) + "]");
  }
  if (e.token && *e.token != s.iteration) {
    throw SessionError(Kind::kStaleToken,
                       "feedback token " + std::to_string(*e.token) +
                           " does not match iteration " +
                           std::to_string(s.iteration));
  }

  const int i = s.iteration + 1;
  const Action& cur = s.current;
  // Preferences need a different previous action to compare against.
  if (s.previous && s.previous->id() != cur.id()) {
    if (e.preference == Preference::kNew) {
      s.dataset.AddPreference(cur.id(), s.previous->id());
    } else if (e.preference == Preference::kOld) {
      s.dataset.AddPreference(s.previous->id(), cur.id());
    }
  }
  if (e.ordinal && cfg.mode == FeedbackMode::kPreferencesOrdinals) {
    s.dataset.AddOrdinal(cur.id(), *e.ordinal, n_cat);
  }
  s.candidates.AddVisited(cur);

  // The line goes through the last believed best (the first action before
  // any fit). Unobserved line points do not move the posterior over visited
  // actions, so random selection skips them.
  if (cfg.selection == Selection::kThompson) {
    const Action& anchor = s.believed_best ? *s.believed_best : cur;
    s.candidates = RefreshCandidates(std::move(s.candidates), grid, anchor,
                                     DeriveSeed({cfg.seed, std::uint64_t(i),
                                                 kLineTag}));
  }
  s.posterior = LaplaceFit(grid, s.candidates.Union(), s.dataset, cfg.Kernel(),
                           cfg.likelihood, cfg.laplace);
  const std::vector<ActionId> visited = s.candidates.VisitedIds();
  const ActionId best = BelievedBest(*s.posterior, visited);
  s.believed_best = grid.FromId(best);
  const double best_mean = s.posterior->mean[s.posterior->IndexOf(best)];

  HistoryEntry h;
  h.iteration = i;
  h.deployed = cur.id();
  h.believed_best = best;
  h.believed_best_mean = best_mean;
  h.preference = e.preference;
  h.ordinal = e.ordinal;
  s.history.push_back(h);
  s.events.push_back(e);
  s.iteration = i;

  if (i >= cfg.budget) {
    s.completed = true;
    return s;
  }
  Action next;
  if (cfg.selection == Selection::kThompson) {
    std::vector<ActionId> line_ids;
    if (cfg.thompson_line_only) {
      for (const Action& a : s.candidates.line()) line_ids.push_back(a.id());
    }
    next = grid.FromId(ThompsonSelect(
        *s.posterior, DeriveSeed({cfg.seed, std::uint64_t(i), kThompsonTag}),
        line_ids));
  } else {
    std::mt19937_64 rng = MakeRng({cfg.seed, std::uint64_t(i), kRandomTag});
    next = grid.Sample(rng);
  }
  s.previous = std::move(s.current);
  s.current = std::move(next);
  return s;
}

Session::Session(SessionConfig cfg, ActionGrid grid)
    : cfg_(std::move(cfg)), grid_(std::move(grid)) {
  cfg_.Validate();
  state_ = StartState(cfg_, grid_);
  if (cfg_.source == FeedbackSource::kSynthetic) {
    oracle_ = OracleConfig::Calibrated(grid_, SyntheticOptimum(cfg_, grid_),
                                       cfg_.correct_prob, cfg_.likelihood);
  }
}

Session::Session(SessionConfig cfg, const std::string& log_path)
    : Session(cfg, ActionGrid(cfg.grid)) {
  if (!log_path.empty()) {
    std::filesystem::remove(log_path);
    log_ = std::make_unique<SessionLog>(log_path);
    Log("start", {{"config", ToJson(cfg_)}});
  }
  PrepareCurrent();
}

std::unique_ptr<Session> Session::Resume(const std::string& log_path) {
  LoadedLog loaded = ReadLog(log_path);
  if (loaded.records.empty() || loaded.records.front().type != "start") {
    throw std::runtime_error(log_path + ": log does not begin with a start record");
  }
  SessionConfig cfg =
      SessionConfigFromJson(loaded.records.front().payload.at("config"));
  ActionGrid grid(cfg.grid);
  std::unique_ptr<Session> s(new Session(std::move(cfg), std::move(grid)));
  for (std::size_t k = 1; k < loaded.records.size(); ++k) {
    const LogRecord& r = loaded.records[k];
    if (r.type == "feedback") {
      s->state_ = ApplyFeedback(s->cfg_, s->grid_, std::move(s->state_),
                                FeedbackFromJson(r.payload.at("event")));
    } else if (r.type == "episode") {
      s->episodes_[r.payload.at("action").get<ActionId>()] =
          MetricsFromJson(r.payload.at("metrics"));
    }
  }
  s->log_ = std::make_unique<SessionLog>(
      log_path, loaded.dropped_tail
                    ? static_cast<std::int64_t>(loaded.valid_bytes)
                    : -1);
  s->PrepareCurrent();
  return s;
}

void Session::Log(const std::string& type, json payload) {
  if (!log_) return;
  LogRecord r;
  r.type = type;
  r.payload = std::move(payload);
  r.timestamp = NowSeconds();
  log_->Append(r);
}

void Session::PrepareCurrent() {
  if (cfg_.episodes_enabled() && !state_.completed) Metrics(state_.current);
}

const EpisodeMetrics* Session::CachedMetrics(ActionId id) const {
  auto it = episodes_.find(id);
  return it == episodes_.end() ? nullptr : &it->second;
}

const EpisodeMetrics& Session::Metrics(const Action& action) {
  if (!cfg_.episodes_enabled()) {
    throw std::logic_error("plant episodes are disabled for this session");
  }
  if (auto it = episodes_.find(action.id()); it != episodes_.end()) {
    return it->second;
  }
  const EpisodeConfig& ep = cfg_.episode;
  const ClfGains gains =
      GainsFromAction(action.values(), ep.profile, ep.defaults);
  EpisodeMetrics m = SimulateEpisode(gains, ep.plant, ep.duration, ep.controller);
  Log("episode", {{"action", action.id()}, {"metrics", ToJson(m)}});
  return episodes_.emplace(action.id(), m).first->second;
}

void Session::Submit(FeedbackEvent event) {
  if (event.timestamp == 0.0) event.timestamp = NowSeconds();
  SessionState next = ApplyFeedback(cfg_, grid_, state_, event);
  Log("feedback", {{"iteration", next.iteration}, {"event", ToJson(event)}});
  state_ = std::move(next);
  PrepareCurrent();
}

FeedbackEvent Session::AutoFeedback() {
  if (state_.completed) {
    throw SessionError(SessionError::Kind::kCompleted, "session is complete");
  }
  std::mt19937_64 rng = MakeRng(
      {cfg_.seed, std::uint64_t(state_.iteration + 1), kFeedbackTag});
  const Action& cur = state_.current;
  FeedbackEvent e;
  switch (cfg_.source) {
    case FeedbackSource::kHuman:
      throw SessionError(SessionError::Kind::kMalformed,
                         "this session expects human feedback");
    case FeedbackSource::kSynthetic: {
      e.note = "synthetic";
      if (state_.previous && state_.previous->id() != cur.id()) {
        PreferenceRecord p =
            SyntheticPreference(grid_, cur, *state_.previous, *oracle_, rng);
        e.preference =
            p.winner == cur.id() ? Preference::kNew : Preference::kOld;
      }
      e.ordinal =
          SyntheticOrdinal(grid_, cur, *oracle_, cfg_.likelihood, rng).label;
      break;
    }
    case FeedbackSource::kAutorater: {
      const EpisodeMetrics m_new = Metrics(cur);
      std::optional<EpisodeMetrics> m_old;
      if (state_.previous && state_.previous->id() != cur.id()) {
        m_old = Metrics(*state_.previous);
      }
      e = PlantAutoraterFeedback(m_new, m_old ? &*m_old : nullptr,
                                 cfg_.autorater, rng);
      break;
    }
  }
  e.token = state_.iteration;
  return e;
}

json Session::ActionJson(const Action& a) const {
  json gains = json::object();
  for (int d = 0; d < grid_.num_dims(); ++d) {
    gains[grid_.dim(d).name] = a.values()[d];
  }
  return {{"id", a.id()},
          {"indices", a.indices()},
          {"values", std::vector<double>(a.values().begin(), a.values().end())},
          {"gains", gains}};
}

json Session::SummaryJson() const {
  const SessionState& s = state_;
  auto with_metrics = [&](const Action& a) {
    json j = ActionJson(a);
    const EpisodeMetrics* m = CachedMetrics(a.id());
    j["metrics"] = m ? ToJson(*m) : json(nullptr);
    return j;
  };
  json j;
  j["iteration"] = s.iteration;
  j["budget"] = cfg_.budget;
  j["completed"] = s.completed;
  j["mode"] = FeedbackModeName(cfg_.mode);
  j["source"] = FeedbackSourceName(cfg_.source);
  j["selection"] = SelectionName(cfg_.selection);
  j["seed"] = cfg_.seed;
  j["grid"] = GridJson(cfg_.grid);
  j["current_action"] = with_metrics(s.current);
  j["previous_action"] = s.previous ? with_metrics(*s.previous) : json(nullptr);
  j["accepts_preference"] =
      !s.completed && s.previous.has_value() && s.previous->id() != s.current.id();
  j["accepts_ordinal"] = cfg_.mode == FeedbackMode::kPreferencesOrdinals;
  j["num_categories"] = cfg_.likelihood.num_categories();
  if (s.believed_best) {
    json b = with_metrics(*s.believed_best);
    b["mean"] = s.history.back().believed_best_mean;
    j["believed_best"] = b;
  } else {
    j["believed_best"] = nullptr;
  }
  j["num_visited"] = s.candidates.visited().size();
  j["num_preferences"] = s.dataset.preferences.size();
  j["num_ordinals"] = s.dataset.ordinals.size();
  return j;
}

json Session::HistoryJson() const {
  json out = json::array();
  for (const HistoryEntry& h : state_.history) {
    out.push_back({{"iteration", h.iteration},
                   {"deployed", h.deployed},
                   {"believed_best", h.believed_best},
                   {"believed_best_mean", h.believed_best_mean},
                   {"preference", h.preference == Preference::kNone
                                      ? json(nullptr)
                                      : json(PreferenceName(h.preference))},
                   {"ordinal", h.ordinal ? json(*h.ordinal) : json(nullptr)}});
  }
  return out;
}

json Session::PosteriorJson() const {
  json j;
  j["iteration"] = state_.iteration;
  json actions = json::array();
  if (const auto& post = state_.posterior) {
    j["converged"] = post->converged;
    j["newton_iterations"] = post->newton_iterations;
    const Eigen::VectorXd sd = post->StdDev();
    for (const Action& a : state_.candidates.visited()) {
      const int k = post->IndexOf(a.id());
      json entry = ActionJson(a);
      entry["mean"] = post->mean[k];
      entry["stddev"] = sd[k];
      actions.push_back(std::move(entry));
    }
  }
  j["actions"] = std::move(actions);
  return j;
}

}  // namespace prefgain
