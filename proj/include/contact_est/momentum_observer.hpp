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

#include "contact_est/reduction.hpp"

namespace contact_est {

/// One sample of the proprioceptive stream. Accelerations are never part of it.
struct MeasurementFrame {
  double t = 0.0;
  Vector5d y = Vector5d::Zero();     // theta_b, theta_1..theta_4 (rad)
  Vector5d ydot = Vector5d::Zero();  // rad/s
  Vector4d tau_mot = Vector4d::Zero();  // measured joint torques (N m)
};

/// Diagonal observer gain K_O (1/s).
struct ObserverGain {
  Vector5d diagonal = Vector5d::Constant(50.0);

  static ObserverGain uniform(double k) { return {Vector5d::Constant(k)}; }
  /// Throws std::invalid_argument unless every entry is positive and finite.
  void validate() const;
};

struct ObserverState {
  Side mode = Side::kLeft;
  Vector5d p_hat = Vector5d::Zero();
  Vector5d tau_hat = Vector5d::Zero();
  ObserverGain gain;
  bool initialized = false;
  /// Set when the last step could not evaluate the reduced model; tau_hat is
  /// then the value carried over from the previous valid step.
  bool stale = false;
};

/// Starts with zero innovation: p_hat = M_red ydot and tau_hat = 0.
ObserverState init_observer(Side mode, const ReducedModel& reduced, const Vector5d& ydot,
                            const ObserverGain& gain);

/// Discrete generalized-momentum observer update for one tick:
///   p    = M_red ydot
///   beta = C_red^T ydot - G_red + tau_red
///   tau_hat = K_O (p - p_hat)
///   p_hat  += dt (beta + tau_hat)
/// Returns the updated state; its tau_hat is the estimate for this tick.
ObserverState step_observer(const ObserverState& obs, const ReducedModel& reduced,
                            const Vector5d& ydot, double dt);

/// Marks the observer stale for a tick whose reduced model was unavailable.
ObserverState hold_observer(const ObserverState& obs);

double torque_magnitude(const Vector5d& tau_hat);

/// Runs one stance hypothesis over a uniformly sampled measurement stream.
class StanceObserver {
 public:
  StanceObserver(const WalkerModel& model, Side stance, const ObserverGain& gain, double dt);

  /// The first frame initializes and then steps, so its estimate is zero.
  const ObserverState& update(const MeasurementFrame& frame);

  const ObserverState& state() const { return state_; }
  Side stance() const { return stance_; }

 private:
  const WalkerModel* model_;
  Side stance_;
  ObserverGain gain_;
  double dt_;
  ObserverState state_;
};

}  // namespace contact_est
