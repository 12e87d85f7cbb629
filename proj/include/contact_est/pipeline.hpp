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
#include <vector>

#include "contact_est/fusion.hpp"
#include "contact_est/momentum_observer.hpp"

namespace contact_est {

struct EstimatorSettings {
  FusionParams fusion;
  ObserverGain gain;
  ContactMode initial_mode = ContactMode::kDual;
  /// First-order low-pass on measured joint velocities; 0 disables it.
  double velocity_cutoff_hz = 0.0;

  void validate() const;
};

/// Per-tick output of the estimator.
struct EstimationResult {
  std::vector<ContactMode> mode_series;
  std::vector<Belief> belief_series;
  /// ||tau_hat|| of the left- and right-stance observers.
  std::vector<std::array<double, 2>> torque_series;
  std::vector<double> v_rel_series;
  /// Ticks on which an observer could not evaluate its reduced model.
  long stale_ticks = 0;
};

/// Norm of the relative velocity of the two feet, from measured coordinates
/// only. The base translation cancels, so it is not needed.
double measured_relative_foot_speed(const WalkerModel& model, const MeasurementFrame& frame);

/// Runs both stance observers and the mode fusion over a frame stream.
/// Frames must be evenly spaced in time.
EstimationResult run_estimation(std::span<const MeasurementFrame> frames, const WalkerModel& model,
                                const EstimatorSettings& settings);

}  // namespace contact_est
