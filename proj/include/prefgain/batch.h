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

#ifndef PREFGAIN_BATCH_H_
#define PREFGAIN_BATCH_H_

#include <span>
#include <string>
#include <vector>

#include "prefgain/session.h"

namespace prefgain {

// Learning variants compared in a batch.
enum class BatchMode { kPreferences, kPreferencesOrdinals, kRandom };

const char* BatchModeName(BatchMode m);  // "pref", "pref+ord", "random"
BatchMode ParseBatchMode(const std::string& name);

struct BatchCurve {
  std::string label;  // mode name, with "@<p>" appended in multi-noise runs
  BatchMode mode = BatchMode::kPreferences;
  double correct_prob = 1.0;
  // errors[run][iteration - 1]
  std::vector<std::vector<double>> errors;
  std::vector<double> mean;
  std::vector<double> std_error;

  double final_mean() const { return mean.back(); }
};

struct ConvergenceReport {
  int runs = 0;
  int iterations = 0;
  std::vector<BatchCurve> curves;

  const BatchCurve* Find(BatchMode mode, double correct_prob) const;
  // Columns: iteration,mode,mean_error,stderr
  std::string ToCsv() const;
};

struct BatchOptions {
  int runs = 10;
  std::vector<BatchMode> modes = {BatchMode::kPreferences,
                                  BatchMode::kPreferencesOrdinals,
                                  BatchMode::kRandom};
  std::vector<double> correct_probs = {1.0};
  int threads = 0;  // 0 = hardware concurrency
};

// Runs every (mode, correct_prob) pair `runs` times. Run r uses seed
// DeriveSeed({base.seed, r}) for all pairs, so curves share the hidden
// optimum and first action run by run. The error at each iteration is
//   synthetic source: ||normalize(best) - normalize(optimum)||_2
//   autorater source: tracking_rms of the believed-best episode.
// The result does not depend on the thread count.
ConvergenceReport RunBatch(const SessionConfig& base,
                           const BatchOptions& options);

// Per-iteration errors of a single session run to its budget.
std::vector<double> RunErrors(const SessionConfig& cfg);

}  // namespace prefgain

#endif  // PREFGAIN_BATCH_H_
