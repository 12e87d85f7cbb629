/*
 * Copyright 2026 The contact_est Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contact_est/config.hpp"
#include "contact_est/gait_simulator.hpp"
#include "contact_est/metrics.hpp"
#include "contact_est/pipeline.hpp"

namespace contact_est {

struct SweepSettings {
  std::vector<double> levels_db = {40.0, 50.0, 60.0, 70.0, 80.0, 90.0};
  int trials = 30;
  std::uint64_t base_seed = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Everything a simulate / estimate / sweep run needs.
struct HarnessConfig {
  WalkerModel model;
  GaitConfig gait;
  EstimatorSettings estimator;
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  double warmup = kDefaultWarmup;
  SweepSettings sweep;

  void validate() const;

  /// Reads model.*, gait.*, observer.*, fusion.*, noise.*, sweep.*, seed and
  /// metrics.warmup. Unknown keys are rejected so typos do not pass silently.
  static HarnessConfig from_config(const KeyValueConfig& config);
  static const std::vector<std::string>& known_keys();
};

/// Runs the estimator over `frames` and scores it against `truth`.
TrialResult evaluate_frames(std::span<const MeasurementFrame> frames,
                            std::span<const ContactModeLabel> truth, const WalkerModel& model,
                            const EstimatorSettings& settings, double warmup = kDefaultWarmup);

/// Adds noise for (snr_db, seed) to a simulated trial's clean frames and
/// evaluates the result.
TrialResult run_noisy_trial(const TrialData& clean, const HarnessConfig& config, double snr_db,
                            std::uint64_t seed);

struct SweepTrial {
  std::uint64_t seed = 0;
  /// Empty when the trial could not be completed.
  std::optional<double> accuracy;
  double accuracy_after_warmup = 0.0;
  long predicted_transitions = 0;
  long true_transitions = 0;
  std::string failure;
};

struct SweepResult {
  std::vector<double> snr_levels_db;
  int trials_per_level = 0;
  std::uint64_t base_seed = 0;
  /// trials[level][trial]
  std::vector<std::vector<SweepTrial>> trials;

  std::vector<std::uint64_t> seeds() const;
  std::vector<std::vector<std::optional<double>>> per_level_accuracies() const;
  /// Mean over completed trials; empty if none completed.
  std::optional<double> mean_accuracy(std::size_t level) const;
  std::size_t completed(std::size_t level) const;
};

/// Seed of trial `trial` at level index `level`, derived from the base seed.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t level, std::size_t trial);

/// Simulates the gait once and runs `trials` independently noised estimates
/// at every level. Trials run in parallel and are merged by (level, trial)
/// index, so the result does not depend on the thread count. A failed
/// simulation or trial is recorded as missing.
SweepResult snr_sweep(const HarnessConfig& config);

}  // namespace contact_est
