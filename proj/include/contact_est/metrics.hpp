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

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "contact_est/trial.hpp"

namespace contact_est {

class LengthMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows are the true mode, columns the estimate, indexed by ContactMode.
using ConfusionMatrix = std::array<std::array<long, 3>, 3>;

long total(const ConfusionMatrix& c);
long correct(const ConfusionMatrix& c);
/// Share of ticks with true mode `m` that were estimated as `m`.
double recall(const ConfusionMatrix& c, ContactMode m);
/// Share of ticks estimated as `m` whose true mode was `m`.
double precision(const ConfusionMatrix& c, ContactMode m);

/// Ticks before this time are left out of the "after warm-up" figures.
constexpr double kDefaultWarmup = 0.1;  // s

struct TrialResult {
  ConfusionMatrix confusion{};
  double accuracy = 0.0;
  /// Same, over ticks with t >= warmup only.
  ConfusionMatrix confusion_after_warmup{};
  double accuracy_after_warmup = 0.0;
  double warmup = kDefaultWarmup;
  long true_transitions = 0;
  long predicted_transitions = 0;

  std::vector<double> times;
  std::vector<ContactMode> mode_series;
  std::vector<ContactMode> truth_series;
  std::vector<std::array<double, 3>> belief_series;
  std::vector<std::array<double, 2>> torque_series;
};

/// Number of changes of value along a series.
long count_transitions(std::span<const ContactMode> series);

/// Scores an estimated mode series sampled at `times` against labeled truth.
/// Throws LengthMismatch if the series and times differ in length or the
/// labels do not cover every sample time.
TrialResult score_trial(std::span<const ContactMode> modes, std::span<const double> times,
                        std::span<const ContactModeLabel> truth, double warmup = kDefaultWarmup);

}  // namespace contact_est
