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

#include "contact_est/constrained_dynamics.hpp"

namespace contact_est {

class KeyValueConfig;

struct PdGains {
  double kp = 400.0;  // 1/s^2
  double kd = 40.0;   // 1/s
};

/// Walking pattern and trial timing.
///
/// A gait alternates a timed dual-support phase, during which the center of
/// mass is carried forward over the lead foot, with a single-support
/// phase that swings the free foot `step_length` ahead of the stance foot
/// and ends at touchdown. With `step_length` and `apex_height` both zero the
/// walker stands still in dual support.
struct GaitConfig {
  double step_duration = 0.8;  // nominal single + dual time per step (s)
  double dual_fraction = 0.5;
  double step_length = 0.3;   // stance foot to landing foot (m)
  double apex_height = 0.06;  // swing foot clearance (m)
  PdGains pd_gains;
  double duration = 5.0;  // s
  double rate = 1000.0;   // Hz

  double hip_height = 0.9;           // m above the stance foot
  double start_com_offset = 0.22;    // center of mass behind the lead foot at t = 0 (m)
  double start_com_speed = 0.31;     // forward center-of-mass speed at t = 0 (m/s)
  double liftoff_com_offset = 0.075;  // center of mass behind the lead foot at liftoff (m)
  double liftoff_com_speed = 0.3;    // forward center-of-mass speed at liftoff (m/s)
  double touchdown_speed = 0.3;      // swing-foot descent speed at nominal touchdown (m/s)

  bool standing() const { return step_length == 0.0 && apex_height == 0.0; }
  double dual_duration() const { return dual_fraction * step_duration; }
  double single_duration() const { return (1.0 - dual_fraction) * step_duration; }
  long frame_count() const;

  void validate() const;
  static GaitConfig from_config(const KeyValueConfig& config);
  static GaitConfig standing_still(double duration = 5.0, double rate = 1000.0);
};

enum class GaitPhase { kDual, kSingle };

struct GaitPhaseState {
  GaitPhase phase = GaitPhase::kDual;
  /// Single support: the stance foot. Dual support: the foot that stays down
  /// at the next liftoff.
  Side lead = Side::kLeft;
  long start_tick = 0;
  double duration = 0.0;
  bool initial = true;
  /// Dual support: (theta_b, COM x, hip y) relative to the lead foot at phase
  /// start. Single support: swing foot relative to the stance foot at liftoff
  /// (x, y) and the landing target x.
  Eigen::Vector3d start_position = Eigen::Vector3d::Zero();
  Eigen::Vector3d start_velocity = Eigen::Vector3d::Zero();
  /// Dual support: height of the center of mass above the lead foot at start.
  double com_height = 0.0;

  Side trailing() const { return other(lead); }
};

struct ControlOutput {
  Vector4d tau = Vector4d::Zero();
  /// Part of tau that realizes the reference accelerations alone.
  Vector4d tau_feedforward = Vector4d::Zero();
  /// Reference minus actual for each kinematic output; unused entries are zero.
  Eigen::Vector4d position_error = Eigen::Vector4d::Zero();
  Eigen::Vector4d reference = Eigen::Vector4d::Zero();
};

/// Point on a 1-D reference: position, velocity, acceleration.
struct ReferencePoint {
  double p = 0.0;
  double v = 0.0;
  double a = 0.0;
};

/// Cubic Hermite from (p0, v0) to (p1, v1) over `duration`; afterwards the end
/// point is extrapolated at constant velocity.
ReferencePoint hermite(double p0, double v0, double p1, double v1, double duration, double t);

/// Quintic from (p0, v0, a0) to (p1, v1, a1) over `duration`; afterwards the
/// end point is extrapolated at constant acceleration.
ReferencePoint quintic(double p0, double v0, double a0, double p1, double v1, double a1,
                       double duration, double t);

/// Swing-foot reference relative to the stance foot at elapsed time t.
/// x follows a cycloid to `target_x`; y rises as a raised cosine to the apex,
/// then descends to cross the ground at the nominal end with `touchdown_speed`.
std::array<ReferencePoint, 2> swing_reference(const GaitConfig& gait, double start_x,
                                              double target_x, double t);

/// Tracks phase-indexed output references by partial feedback linearization of
/// the constrained dynamics: joint torques are chosen so the tracked outputs
/// follow reference + PD acceleration exactly for the current contact set.
///
/// Single support tracks torso angle, hip height over the stance foot, and the
/// swing foot position relative to the stance foot; rotation about the stance
/// foot is left to the passive dynamics. Dual support tracks torso angle, the
/// horizontal center of mass and hip height relative to the lead foot. The
/// remaining torque direction only squeezes the feet horizontally; it is set so
/// both feet carry the same ratio of horizontal to vertical force.
class GaitController {
 public:
  GaitController(const WalkerModel& model, const GaitConfig& gait);

  ControlOutput command(const State& state, const ContactSet& contacts, const GaitPhaseState& phase,
                        long tick, const ConstraintStabilization& stabilization = {}) const;

  GaitPhaseState begin_dual(const State& state, Side lead, long tick, bool initial) const;
  GaitPhaseState begin_single(const State& state, Side stance, long tick) const;

  const GaitConfig& gait() const { return gait_; }
  const WalkerModel& model() const { return *model_; }

 private:
  const WalkerModel* model_;
  GaitConfig gait_;
};

/// Both feet on the ground with the hip at `hip_x`, knees bent forward.
State standing_state(const WalkerModel& model, double hip_height, double left_foot_x,
                     double right_foot_x);

}  // namespace contact_est
