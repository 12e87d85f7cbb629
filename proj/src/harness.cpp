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

#include "contact_est/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <stdexcept>
#include <thread>

#include "contact_est/measurement_noise.hpp"

namespace contact_est {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t parse_seed(const KeyValueConfig& c, const std::string& key, std::uint64_t fallback) {
  const long long v = c.get_int(key, static_cast<long long>(fallback));
  if (v < 0) throw ConfigError(key + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

const std::vector<std::string>& HarnessConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "model.link_masses",      "model.link_lengths",     "model.com_offsets",
      "model.link_inertias",    "model.gravity",          "gait.step_duration",
      "gait.dual_fraction",     "gait.step_length",       "gait.apex_height",
      "gait.kp",                "gait.kd",                "gait.duration",
      "gait.rate",              "gait.hip_height",        "gait.start_com_offset",
      "gait.start_com_speed",   "gait.liftoff_com_offset", "gait.liftoff_com_speed",
      "gait.touchdown_speed",   "observer.gain",          "observer.velocity_cutoff_hz",
      "fusion.tau_t",           "fusion.tau_b",           "fusion.v_t",
      "fusion.v_b",             "fusion.switch_belief",   "fusion.initial_confidence",
      "estimator.initial_mode", "noise.snr_db",           "seed",
      "metrics.warmup",         "sweep.levels_db",        "sweep.trials",
      "sweep.base_seed",        "sweep.threads",
  };
  return keys;
}

void HarnessConfig::validate() const {
  model.validate();
  gait.validate();
  estimator.validate();
  if (std::isnan(snr_db)) throw std::invalid_argument("noise.snr_db must be a number");
  if (!(warmup >= 0.0) || !std::isfinite(warmup)) {
    throw std::invalid_argument("metrics.warmup must be finite and non-negative");
  }
  if (sweep.trials < 1) throw std::invalid_argument("sweep.trials must be at least 1");
  if (sweep.levels_db.empty()) throw std::invalid_argument("sweep.levels_db must not be empty");
  for (double level : sweep.levels_db) {
    if (std::isnan(level)) throw std::invalid_argument("sweep.levels_db contains NaN");
  }
}

HarnessConfig HarnessConfig::from_config(const KeyValueConfig& c) {
  const auto& keys = known_keys();
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [key, value] : c.entries()) {
    if (!known.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }

  HarnessConfig h;
  try {
    h.model = WalkerModel::from_config(c);
    h.gait = GaitConfig::from_config(c);

    const auto gains = c.get_doubles("observer.gain", {});
    if (gains.size() == 1) {
      h.estimator.gain = ObserverGain::uniform(gains[0]);
    } else if (gains.size() == 5) {
      for (int i = 0; i < 5; ++i) h.estimator.gain.diagonal(i) = gains[i];
    } else if (!gains.empty()) {
      throw ConfigError("observer.gain needs 1 or 5 values");
    }
    h.estimator.velocity_cutoff_hz =
        c.get_double("observer.velocity_cutoff_hz", h.estimator.velocity_cutoff_hz);

    auto& f = h.estimator.fusion;
    f.tau_t = c.get_double("fusion.tau_t", f.tau_t);
    f.tau_b = c.get_double("fusion.tau_b", f.tau_b);
    f.v_t = c.get_double("fusion.v_t", f.v_t);
    f.v_b = c.get_double("fusion.v_b", f.v_b);
    f.switch_belief = c.get_double("fusion.switch_belief", f.switch_belief);
    f.initial_confidence = c.get_double("fusion.initial_confidence", f.initial_confidence);
    if (auto mode = c.raw("estimator.initial_mode")) {
      h.estimator.initial_mode = parse_contact_mode(*mode);
    }

    h.snr_db = c.get_double("noise.snr_db", h.snr_db);
    h.seed = parse_seed(c, "seed", h.seed);
    h.warmup = c.get_double("metrics.warmup", h.warmup);

    h.sweep.levels_db = c.get_doubles("sweep.levels_db", h.sweep.levels_db);
    const long long trials = c.get_int("sweep.trials", h.sweep.trials);
    if (trials < 1 || trials > 1'000'000) throw ConfigError("sweep.trials must be in [1, 1e6]");
    h.sweep.trials = static_cast<int>(trials);
    h.sweep.base_seed = parse_seed(c, "sweep.base_seed", h.sweep.base_seed);
    const long long threads = c.get_int("sweep.threads", h.sweep.threads);
    if (threads < 0 || threads > 4096) throw ConfigError("sweep.threads must be in [0, 4096]");
    h.sweep.threads = static_cast<unsigned>(threads);

    h.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return h;
}

TrialResult evaluate_frames(std::span<const MeasurementFrame> frames,
                            std::span<const ContactModeLabel> truth, const WalkerModel& model,
                            const EstimatorSettings& settings, double warmup) {
  const EstimationResult est = run_estimation(frames, model, settings);
  std::vector<double> times;
  times.reserve(frames.size());
  for (const auto& f : frames) times.push_back(f.t);

  TrialResult result = score_trial(est.mode_series, times, truth, warmup);
  result.belief_series.reserve(est.belief_series.size());
  for (const auto& b : est.belief_series) result.belief_series.push_back({b(0), b(1), b(2)});
  result.torque_series = est.torque_series;
  return result;
}

TrialResult run_noisy_trial(const TrialData& clean, const HarnessConfig& config, double snr_db,
                            std::uint64_t seed) {
  const auto noisy = add_noise(clean.clean_frames, snr_db, seed);
  return evaluate_frames(noisy, clean.truth, config.model, config.estimator, config.warmup);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t level, std::size_t trial) {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ level) ^ trial);
}

std::vector<std::uint64_t> SweepResult::seeds() const {
  std::vector<std::uint64_t> out;
  for (const auto& level : trials) {
    for (const auto& t : level) out.push_back(t.seed);
  }
  return out;
}

std::vector<std::vector<std::optional<double>>> SweepResult::per_level_accuracies() const {
  std::vector<std::vector<std::optional<double>>> out;
  for (const auto& level : trials) {
    auto& row = out.emplace_back();
    for (const auto& t : level) row.push_back(t.accuracy);
  }
  return out;
}

std::optional<double> SweepResult::mean_accuracy(std::size_t level) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : trials.at(level)) {
    if (t.accuracy) {
      sum += *t.accuracy;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::size_t SweepResult::completed(std::size_t level) const {
  const auto& row = trials.at(level);
  return static_cast<std::size_t>(
      std::count_if(row.begin(), row.end(), [](const SweepTrial& t) { return t.accuracy.has_value(); }));
}

SweepResult snr_sweep(const HarnessConfig& config) {
  config.validate();
  SweepResult result;
  result.snr_levels_db = config.sweep.levels_db;
  result.trials_per_level = config.sweep.trials;
  result.base_seed = config.sweep.base_seed;

  const std::size_t n_levels = result.snr_levels_db.size();
  const std::size_t n_trials = static_cast<std::size_t>(config.sweep.trials);
  result.trials.assign(n_levels, std::vector<SweepTrial>(n_trials));
  for (std::size_t l = 0; l < n_levels; ++l) {
    for (std::size_t k = 0; k < n_trials; ++k) {
      result.trials[l][k].seed = trial_seed(config.sweep.base_seed, l, k);
    }
  }

  // The gait itself is deterministic, so one simulation serves every trial.
  TrialData clean;
  try {
    clean = simulate_trial(config.model, config.gait);
  } catch (const std::exception& e) {
    for (auto& level : result.trials) {
      for (auto& t : level) t.failure = std::string("simulation failed: ") + e.what();
    }
    return result;
  }

  const std::size_t jobs = n_levels * n_trials;
  unsigned workers = config.sweep.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t job = next.fetch_add(1); job < jobs; job = next.fetch_add(1)) {
      const std::size_t l = job / n_trials;
      SweepTrial& slot = result.trials[l][job % n_trials];
      try {
        const TrialResult r = run_noisy_trial(clean, config, result.snr_levels_db[l], slot.seed);
        slot.accuracy = r.accuracy;
        slot.accuracy_after_warmup = r.accuracy_after_warmup;
        slot.predicted_transitions = r.predicted_transitions;
        slot.true_transitions = r.true_transitions;
      } catch (const std::exception& e) {
        slot.failure = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return result;
}

}  // namespace contact_est
