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

// tune: command-line front end.
//
//   tune serve   --config cfg.json --port 8080 [--log session.jsonl] [--resume]
//   tune batch   --config cfg.json --runs 10 --iters 100 --mode pref+ord
//                --noise 0.9 --seed 1 --out curves.csv
//   tune episode --gains '[200, 20]' [--config cfg.json]

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prefgain/batch.h"
#include "prefgain/http_service.h"
#include "prefgain/plant.h"
#include "prefgain/session.h"

namespace {

using prefgain::SessionConfig;

prefgain::SessionService* g_service = nullptr;

void OnSignal(int) {
  if (g_service) g_service->Stop();
}

int Serve(const std::string& config_path, const std::string& host, int port,
          const std::string& log_path, bool resume) {
  prefgain::SessionService::Options opts;
  opts.log_path = log_path;
  if (!config_path.empty()) {
    opts.base_dir = std::filesystem::path(config_path).parent_path().string();
  }
  prefgain::SessionService service(opts);
  if (resume) {
    service.Resume();
  } else if (!config_path.empty()) {
    service.Start(prefgain::LoadSessionConfig(config_path));
  }
  g_service = &service;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), port);
  if (!service.Listen(host, port)) {
    std::fprintf(stderr, "cannot bind %s:%d\n", host.c_str(), port);
    return 1;
  }
  return 0;
}

int Batch(const std::string& config_path, int runs, int iters,
          const std::vector<std::string>& modes,
          const std::vector<double>& noise, std::int64_t seed, int threads,
          const std::string& out_path) {
  SessionConfig cfg = prefgain::LoadSessionConfig(config_path);
  if (cfg.source == prefgain::FeedbackSource::kHuman) {
    cfg.source = prefgain::FeedbackSource::kSynthetic;
  }
  if (iters > 0) cfg.budget = iters;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

  prefgain::BatchOptions opts;
  opts.runs = runs;
  opts.threads = threads;
  if (!modes.empty()) {
    opts.modes.clear();
    for (const auto& m : modes) opts.modes.push_back(prefgain::ParseBatchMode(m));
  }
  if (!noise.empty()) opts.correct_probs = noise;

  const prefgain::ConvergenceReport report = prefgain::RunBatch(cfg, opts);
  const std::string csv = report.ToCsv();
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
      return 1;
    }
    out << csv;
  }
  for (const auto& c : report.curves) {
    std::fprintf(stderr, "%-14s final mean error %.4f (stderr %.4f)\n",
                 c.label.c_str(), c.mean.back(), c.std_error.back());
  }
  return 0;
}

int Episode(const std::string& gains_json, const std::string& config_path) {
  prefgain::EpisodeConfig ep;
  if (!config_path.empty()) {
    ep = prefgain::LoadSessionConfig(config_path).episode;
  }
  nlohmann::json j = nlohmann::json::parse(gains_json, nullptr, false);
  std::vector<double> values;
  if (j.is_array()) {
    values = j.get<std::vector<double>>();
  } else if (j.is_object() && j.contains("values")) {
    values = j.at("values").get<std::vector<double>>();
  } else {
    std::fprintf(stderr, "--gains must be a JSON array or {\"values\": [...]}\n");
    return 2;
  }
  const Eigen::VectorXd a =
      Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  const prefgain::ClfGains gains =
      prefgain::GainsFromAction(a, ep.profile, ep.defaults);
  const prefgain::EpisodeMetrics m =
      prefgain::SimulateEpisode(gains, ep.plant, ep.duration, ep.controller);
  std::cout << prefgain::ToJson(m).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference-based gain tuning"};
  app.require_subcommand(1);

  std::string config, log_path = "session.jsonl", host = "127.0.0.1";
  int port = 8080;
  bool resume = false;
  auto* serve = app.add_subcommand("serve", "run the session HTTP service");
  serve->add_option("--config", config, "session config (JSON)");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--log", log_path, "session log (JSON lines)");
  serve->add_flag("--resume", resume, "rebuild the session from --log");

  int runs = 10, iters = 0, threads = 0;
  std::int64_t seed = -1;
  std::vector<std::string> modes;
  std::vector<double> noise;
  std::string out;
  auto* batch = app.add_subcommand("batch", "simulated convergence study");
  batch->add_option("--config", config, "session config (JSON)")->required();
  batch->add_option("--runs", runs, "runs per curve");
  batch->add_option("--iters", iters, "iterations per run (default: budget)");
  batch->add_option("--mode", modes, "pref, pref+ord, random (repeatable)")
      ->check(CLI::IsMember({"pref", "pref+ord", "random"}));
  batch->add_option("--noise", noise,
                    "probability of correct feedback (repeatable)")
      ->check(CLI::Range(0.5, 1.0));
  batch->add_option("--seed", seed, "master seed (default: config seed)");
  batch->add_option("--threads", threads, "worker threads (0 = all cores)");
  batch->add_option("--out", out, "CSV output path ('-' for stdout)");

  std::string gains;
  auto* episode = app.add_subcommand("episode", "simulate one plant episode");
  episode->add_option("--gains", gains, "action values as a JSON array")
      ->required();
  episode->add_option("--config", config, "take plant settings from a config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) return Serve(config, host, port, log_path, resume);
    if (*batch) {
      return Batch(config, runs, iters, modes, noise, seed, threads, out);
    }
    if (*episode) return Episode(gains, config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
