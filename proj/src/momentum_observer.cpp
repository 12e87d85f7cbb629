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

#include "contact_est/momentum_observer.hpp"

#include <cmath>
#include <stdexcept>

namespace contact_est {

void ObserverGain::validate() const {
  for (int i = 0; i < kReducedDof; ++i) {
    if (!(diagonal[i] > 0.0) || !std::isfinite(diagonal[i])) {
      throw std::invalid_argument("observer gain entries must be positive and finite");
    }
  }
}

ObserverState init_observer(Side mode, const ReducedModel& reduced, const Vector5d& ydot,
                            const ObserverGain& gain) {
  gain.validate();
  ObserverState obs;
  obs.mode = mode;
  obs.gain = gain;
  obs.p_hat = reduced.M_red * ydot;
  obs.tau_hat.setZero();
  obs.initialized = true;
  return obs;
}

ObserverState step_observer(const ObserverState& obs, const ReducedModel& reduced,
                            const Vector5d& ydot, double dt) {
  if (!obs.initialized) throw std::logic_error("step_observer called before init_observer");
  if (!(dt > 0.0)) throw std::invalid_argument("observer time step must be positive");
  if (reduced.mode != obs.mode) throw std::invalid_argument("reduced model is for the other stance");

  ObserverState next = obs;
  const Vector5d p = reduced.M_red * ydot;
  const Vector5d beta = reduced.C_red.transpose() * ydot - reduced.G_red + reduced.tau_red;
  next.tau_hat = obs.gain.diagonal.cwiseProduct(p - obs.p_hat);
  next.p_hat = obs.p_hat + dt * (beta + next.tau_hat);
  next.stale = false;
  return next;
}

ObserverState hold_observer(const ObserverState& obs) {
  ObserverState next = obs;
  next.stale = true;
  return next;
}

double torque_magnitude(const Vector5d& tau_hat) { return tau_hat.norm(); }

StanceObserver::StanceObserver(const WalkerModel& model, Side stance, const ObserverGain& gain,
                               double dt)
    : model_(&model), stance_(stance), gain_(gain), dt_(dt) {
  gain_.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("observer time step must be positive");
  state_.mode = stance;
  state_.gain = gain;
}

const ObserverState& StanceObserver::update(const MeasurementFrame& frame) {
  try {
    const ReducedModel reduced =
        reduce_for_stance(*model_, stance_, frame.y, frame.ydot, frame.tau_mot);
    if (!state_.initialized) state_ = init_observer(stance_, reduced, frame.ydot, gain_);
    state_ = step_observer(state_, reduced, frame.ydot, dt_);
  } catch (const SingularStack&) {
    // An uninitialized observer has nothing to hold; it reports zero torque.
    state_ = hold_observer(state_);
  }
  return state_;
}

}  // namespace contact_est
