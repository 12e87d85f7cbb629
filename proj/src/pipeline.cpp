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

#include "contact_est/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contact_est {

void EstimatorSettings::validate() const {
  fusion.validate();
  gain.validate();
  if (!(velocity_cutoff_hz >= 0.0) || !std::isfinite(velocity_cutoff_hz)) {
    throw std::invalid_argument("velocity cutoff must be finite and non-negative");
  }
}

double measured_relative_foot_speed(const WalkerModel& model, const MeasurementFrame& frame) {
  Vector7d q = Vector7d::Zero();
  Vector7d qdot = Vector7d::Zero();
  q.tail<kReducedDof>() = frame.y;
  qdot.tail<kReducedDof>() = frame.ydot;
  return relative_foot_velocity(model, q, qdot).norm();
}

namespace {

double uniform_step(std::span<const MeasurementFrame> frames) {
  if (frames.size() < 2) return 1.0;  // a lone frame only initializes
  const double dt = frames[1].t - frames[0].t;
  if (!(dt > 0.0)) throw std::invalid_argument("frame times must increase");
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const double step = frames[k].t - frames[k - 1].t;
    if (std::abs(step - dt) > 1e-6 * dt) {
      throw std::invalid_argument("frames are not evenly spaced at index " + std::to_string(k));
    }
  }
  return dt;
}

}  // namespace

EstimationResult run_estimation(std::span<const MeasurementFrame> frames, const WalkerModel& model,
                                const EstimatorSettings& settings) {
  if (frames.empty()) throw std::invalid_argument("no frames to estimate from");
  settings.validate();
  const double dt = uniform_step(frames);

  StanceObserver left(model, Side::kLeft, settings.gain, dt);
  StanceObserver right(model, Side::kRight, settings.gain, dt);
  ContactFusion fusion(settings.fusion, settings.initial_mode);

  double alpha = 1.0;
  if (settings.velocity_cutoff_hz > 0.0) {
    const double rc = 1.0 / (2.0 * std::numbers::pi * settings.velocity_cutoff_hz);
    alpha = dt / (rc + dt);
  }

  EstimationResult out;
  out.mode_series.reserve(frames.size());
  out.belief_series.reserve(frames.size());
  out.torque_series.reserve(frames.size());
  out.v_rel_series.reserve(frames.size());

  Vector5d filtered = frames.front().ydot;
  for (const MeasurementFrame& raw : frames) {
    MeasurementFrame frame = raw;
    filtered += alpha * (raw.ydot - filtered);
    frame.ydot = filtered;

    const ObserverState& l = left.update(frame);
    const ObserverState& r = right.update(frame);
    FusionInput in;
    in.tau_norm_left = torque_magnitude(l.tau_hat);
    in.tau_norm_right = torque_magnitude(r.tau_hat);
    in.v_rel_norm = measured_relative_foot_speed(model, frame);
    in.left_stale = l.stale;
    in.right_stale = r.stale;
    if (l.stale || r.stale) ++out.stale_ticks;

    const BeliefState& b = fusion.step(in);
    out.mode_series.push_back(b.active_mode);
    out.belief_series.push_back(b.P);
    out.torque_series.push_back({in.tau_norm_left, in.tau_norm_right});
    out.v_rel_series.push_back(in.v_rel_norm);
  }
  return out;
}

}  // namespace contact_est
