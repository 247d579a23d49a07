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

#include "prefgain/batch.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "prefgain/random.h"

namespace prefgain {

const char* BatchModeName(BatchMode m) {
  switch (m) {
    case BatchMode::kPreferences: return "pref";
    case BatchMode::kPreferencesOrdinals: return "pref+ord";
    case BatchMode::kRandom: return "random";
  }
  return "?";
}

BatchMode ParseBatchMode(const std::string& name) {
  if (name == "pref") return BatchMode::kPreferences;
  if (name == "pref+ord") return BatchMode::kPreferencesOrdinals;
  if (name == "random") return BatchMode::kRandom;
  throw std::invalid_argument("unknown batch mode '" + name + "'");
}

const BatchCurve* ConvergenceReport::Find(BatchMode mode,
                                          double correct_prob) const {
  for (const BatchCurve& c : curves) {
    if (c.mode == mode && c.correct_prob == correct_prob) return &c;
  }
  return nullptr;
}

std::string ConvergenceReport::ToCsv() const {
  std::ostringstream out;
  out << "iteration,mode,mean_error,stderr\n";
  char buf[64];
  for (const BatchCurve& c : curves) {
    for (int i = 0; i < iterations; ++i) {
      out << (i + 1) << ',' << c.label << ',';
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g", c.mean[i], c.std_error[i]);
      out << buf << '\n';
    }
  }
  return out.str();
}

std::vector<double> RunErrors(const SessionConfig& cfg) {
  Session session(cfg);
  std::optional<Action> optimum;
  if (cfg.source == FeedbackSource::kSynthetic) {
    optimum = session.oracle()->hidden_optimum;
  } else if (cfg.source != FeedbackSource::kAutorater) {
    throw std::invalid_argument("batch runs need a synthetic or autorater source");
  }
  std::vector<double> errors;
  errors.reserve(cfg.budget);
  while (!session.state().completed) {
    session.Step();
    const Action& best = *session.state().believed_best;
    errors.push_back(optimum
                         ? NormalizedDistance(session.grid(), best, *optimum)
                         : session.Metrics(best).tracking_rms);
  }
  return errors;
}

ConvergenceReport RunBatch(const SessionConfig& base,
                           const BatchOptions& options) {
  if (options.runs < 1) throw std::invalid_argument("runs must be positive");
  if (options.modes.empty() || options.correct_probs.empty()) {
    throw std::invalid_argument("batch needs at least one mode and noise level");
  }
  base.Validate();

  ConvergenceReport report;
  report.runs = options.runs;
  report.iterations = base.budget;
  const bool tag_noise = options.correct_probs.size() > 1;
  for (double p : options.correct_probs) {
    for (BatchMode m : options.modes) {
      BatchCurve c;
      c.mode = m;
      c.correct_prob = p;
      c.label = BatchModeName(m);
      if (tag_noise) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "@%g", p);
        c.label += buf;
      }
      c.errors.assign(options.runs, {});
      report.curves.push_back(std::move(c));
    }
  }

  struct Job {
    std::size_t curve;
    int run;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < report.curves.size(); ++c) {
    for (int r = 0; r < options.runs; ++r) jobs.push_back({c, r});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      BatchCurve& curve = report.curves[jobs[k].curve];
      SessionConfig cfg = base;
      cfg.seed = DeriveSeed({base.seed, std::uint64_t(jobs[k].run)});
      cfg.correct_prob = curve.correct_prob;
      cfg.mode = curve.mode == BatchMode::kPreferences
                     ? FeedbackMode::kPreferences
                     : FeedbackMode::kPreferencesOrdinals;
      cfg.selection = curve.mode == BatchMode::kRandom ? Selection::kRandom
                                                       : Selection::kThompson;
      try {
        curve.errors[jobs[k].run] = RunErrors(cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const int n = options.runs;
  for (BatchCurve& c : report.curves) {
    c.mean.assign(report.iterations, 0.0);
    c.std_error.assign(report.iterations, 0.0);
    for (int i = 0; i < report.iterations; ++i) {
      double sum = 0.0;
      for (int r = 0; r < n; ++r) sum += c.errors[r][i];
      const double mean = sum / n;
      double ss = 0.0;
      for (int r = 0; r < n; ++r) ss += (c.errors[r][i] - mean) * (c.errors[r][i] - mean);
      c.mean[i] = mean;
      c.std_error[i] = n > 1 ? std::sqrt(ss / (n - 1)) / std::sqrt(double(n)) : 0.0;
    }
  }
  return report;
}

}  // namespace prefgain
