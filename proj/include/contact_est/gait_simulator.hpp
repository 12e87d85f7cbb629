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
#include <stdexcept>
#include <vector>

#include "contact_est/gait_controller.hpp"
#include "contact_est/momentum_observer.hpp"
#include "contact_est/trial.hpp"

namespace contact_est {

class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(long tick, const std::string& why);
  long tick() const { return tick_; }

 private:
  long tick_;
};

/// Full hybrid state of the simulated walker.
struct SimState {
  State x;
  ContactSet contacts;
  ConstraintStabilization pins;
  GaitPhaseState phase;
  long tick = 0;
};

enum class ContactEvent { kNone, kTouchdown, kCommandedLiftoff, kUnilateralLiftoff };

/// What happened over one tick starting at `start.tick`.
struct StepRecord {
  /// Contact set under which the integration ran (after liftoff events).
  ContactSet applied_contacts;
  ControlOutput control;
  ConstraintForce force;
  ContactEvent liftoff = ContactEvent::kNone;
  bool touchdown = false;
  /// Kinetic energy just before and after the touchdown impact, when one fired.
  double impact_energy_before = 0.0;
  double impact_energy_after = 0.0;
};

/// Baumgarte gains applied to active foot constraints.
constexpr double kBaumgarteAlpha = 20.0;
constexpr double kBaumgarteBeta = 20.0;

SimState initial_sim_state(const WalkerModel& model, const GaitConfig& gait);

/// Advances one tick: commanded or unilateral liftoff at the start of the
/// tick, control, semi-implicit Euler integration, touchdown location by
/// linear interpolation of the swing-foot height with a plastic impact, and
/// projection back onto the active constraints.
StepRecord hybrid_step(SimState& state, const GaitController& controller, double dt);

/// Per-tick ground truth and diagnostics.
struct TickTruth {
  Vector7d q;
  Vector7d qdot;
  ContactSet contacts;     // contact set holding when the frame was sampled
  StepRecord step;
};

struct TrialData {
  std::vector<MeasurementFrame> frames;        // with measurement noise
  std::vector<MeasurementFrame> clean_frames;  // before noise
  std::vector<ContactModeLabel> truth;
  std::vector<TickTruth> ticks;
  double t_end = 0.0;

  std::vector<double> times() const;
  std::vector<ContactMode> truth_modes() const;
};

/// Runs the gait for gait.duration at gait.rate. The trajectory is
/// deterministic; `seed` and `snr_db` only shape the measurement noise
/// (snr_db = +inf leaves frames equal to clean_frames).
TrialData simulate_trial(const WalkerModel& model, const GaitConfig& gait,
                         double snr_db = std::numeric_limits<double>::infinity(),
                         std::uint64_t seed = 0);

MeasurementFrame measure(const State& x, const Vector4d& tau, double t);

}  // namespace contact_est
