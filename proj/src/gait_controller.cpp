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

#include "contact_est/gait_controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "contact_est/config.hpp"

namespace contact_est {

namespace {

using RowVector7d = Eigen::Matrix<double, 1, kDof>;

// Least share of vertical load either foot keeps in dual support. Before a
// commanded liftoff the trailing foot's floor ramps out and the foot is then
// held unloaded, so it leaves the ground with no force on it.
constexpr double kMinLoadShare = 0.05;
constexpr double kUnloadRamp = 0.1;   // s
constexpr double kUnloadHold = 0.08;  // s
// Largest foot-placement correction, as a fraction of the step length.
constexpr double kMaxStepShift = 0.5;

struct TrackedOutput {
  RowVector7d J;
  double Jdot_qdot;
  double value;
  ReferencePoint ref;
};

// Row of the stacked reaction vector holding the vertical force on `side`.
int vertical_row(const ContactSet& contacts, Side side) {
  if (side == Side::kLeft) return 1;
  return contacts.left ? 3 : 1;
}

Eigen::Vector2d leg_angles(double l1, double l2, double dx, double dy) {
  // Absolute thigh and shank angles for a foot at (dx, dy) from the hip with
  // the knee in front of the hip-foot line.
  const double d = std::hypot(dx, dy);
  if (d >= l1 + l2 || d <= std::abs(l1 - l2)) {
    throw std::invalid_argument("foot position out of reach of the leg");
  }
  const double phi = std::atan2(dx, -dy);
  const double at_hip = std::acos((l1 * l1 + d * d - l2 * l2) / (2.0 * l1 * d));
  const double at_foot = std::acos((l2 * l2 + d * d - l1 * l1) / (2.0 * l2 * d));
  return {phi + at_hip, phi - at_foot};
}

}  // namespace

long GaitConfig::frame_count() const { return std::lround(duration * rate); }

void GaitConfig::validate() const {
  if (!(rate > 0.0) || !(duration > 0.0)) throw std::invalid_argument("rate and duration must be positive");
  if (!(dual_fraction > 0.0 && dual_fraction < 1.0)) {
    throw std::invalid_argument("dual_fraction must lie in (0, 1)");
  }
  if (!(step_duration > 0.0)) throw std::invalid_argument("step_duration must be positive");
  if (step_length < 0.0 || apex_height < 0.0 || !(hip_height > 0.0)) {
    throw std::invalid_argument("gait geometry must be non-negative");
  }
  if (pd_gains.kp < 0.0 || pd_gains.kd < 0.0) throw std::invalid_argument("PD gains must be non-negative");
}

GaitConfig GaitConfig::from_config(const KeyValueConfig& c) {
  GaitConfig g;
  g.step_duration = c.get_double("gait.step_duration", g.step_duration);
  g.dual_fraction = c.get_double("gait.dual_fraction", g.dual_fraction);
  g.step_length = c.get_double("gait.step_length", g.step_length);
  g.apex_height = c.get_double("gait.apex_height", g.apex_height);
  g.pd_gains.kp = c.get_double("gait.kp", g.pd_gains.kp);
  g.pd_gains.kd = c.get_double("gait.kd", g.pd_gains.kd);
  g.duration = c.get_double("gait.duration", g.duration);
  g.rate = c.get_double("gait.rate", g.rate);
  g.hip_height = c.get_double("gait.hip_height", g.hip_height);
  g.start_com_offset = c.get_double("gait.start_com_offset", g.start_com_offset);
  g.start_com_speed = c.get_double("gait.start_com_speed", g.start_com_speed);
  g.liftoff_com_offset = c.get_double("gait.liftoff_com_offset", g.liftoff_com_offset);
  g.liftoff_com_speed = c.get_double("gait.liftoff_com_speed", g.liftoff_com_speed);
  g.touchdown_speed = c.get_double("gait.touchdown_speed", g.touchdown_speed);
  g.validate();
  return g;
}

GaitConfig GaitConfig::standing_still(double duration, double rate) {
  GaitConfig g;
  g.step_length = 0.0;
  g.apex_height = 0.0;
  g.duration = duration;
  g.rate = rate;
  return g;
}

ReferencePoint hermite(double p0, double v0, double p1, double v1, double T, double t) {
  if (t >= T) return {p1 + v1 * (t - T), v1, 0.0};
  if (t <= 0.0) return {p0, v0, 0.0};
  const double s = t / T;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double m0 = v0 * T;
  const double m1 = v1 * T;
  const double p = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 +
                   (s3 - s2) * m1;
  const double dp = (6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * p1 +
                    (3 * s2 - 2 * s) * m1;
  const double ddp = (12 * s - 6) * p0 + (6 * s - 4) * m0 + (-12 * s + 6) * p1 + (6 * s - 2) * m1;
  return {p, dp / T, ddp / (T * T)};
}

ReferencePoint quintic(double p0, double v0, double a0, double p1, double v1, double a1,
                       double T, double t) {
  if (t >= T) {
    const double dt = t - T;
    return {p1 + v1 * dt + 0.5 * a1 * dt * dt, v1 + a1 * dt, a1};
  }
  if (t <= 0.0) return {p0, v0, a0};
  // Coefficients of p(t) = sum c_k t^k.
  const double T2 = T * T;
  const double T3 = T2 * T;
  const double T4 = T3 * T;
  const double T5 = T4 * T;
  const double c0 = p0;
  const double c1 = v0;
  const double c2 = 0.5 * a0;
  const double c3 = (20 * (p1 - p0) - (8 * v1 + 12 * v0) * T - (3 * a0 - a1) * T2) / (2 * T3);
  const double c4 = (30 * (p0 - p1) + (14 * v1 + 16 * v0) * T + (3 * a0 - 2 * a1) * T2) / (2 * T4);
  const double c5 = (12 * (p1 - p0) - (6 * v1 + 6 * v0) * T - (a0 - a1) * T2) / (2 * T5);
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {c0 + c1 * t + c2 * t2 + c3 * t3 + c4 * t3 * t + c5 * t3 * t2,
          c1 + 2 * c2 * t + 3 * c3 * t2 + 4 * c4 * t3 + 5 * c5 * t3 * t,
          2 * c2 + 6 * c3 * t + 12 * c4 * t2 + 20 * c5 * t3};
}

std::array<ReferencePoint, 2> swing_reference(const GaitConfig& gait, double start_x,
                                              double target_x, double t) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double T = gait.single_duration();
  const double s = t / T;
  std::array<ReferencePoint, 2> out;

  if (s >= 1.0) {
    out[0] = {target_x, 0.0, 0.0};
  } else {
    const double span = target_x - start_x;
    out[0] = {start_x + span * (s - std::sin(kTwoPi * s) / kTwoPi),
              span * (1.0 - std::cos(kTwoPi * s)) / T, span * kTwoPi * std::sin(kTwoPi * s) / (T * T)};
  }

  const double h = gait.apex_height;
  if (s <= 0.5) {
    out[1] = {0.5 * h * (1.0 - std::cos(kTwoPi * s)), 0.5 * h * kTwoPi * std::sin(kTwoPi * s) / T,
              0.5 * h * kTwoPi * kTwoPi * std::cos(kTwoPi * s) / (T * T)};
  } else {
    out[1] = hermite(h, 0.0, 0.0, -gait.touchdown_speed, 0.5 * T, t - 0.5 * T);
  }
  return out;
}

GaitController::GaitController(const WalkerModel& model, const GaitConfig& gait)
    : model_(&model), gait_(gait) {
  gait_.validate();
}

GaitPhaseState GaitController::begin_dual(const State& s, Side lead, long tick, bool initial) const {
  GaitPhaseState ph;
  ph.phase = GaitPhase::kDual;
  ph.lead = lead;
  ph.start_tick = tick;
  ph.initial = initial;
  ph.duration = gait_.dual_duration();
  const Eigen::Vector2d foot = foot_position(*model_, s.q, lead);
  const Eigen::Vector2d foot_vel = foot_jacobian(*model_, s.q, lead) * s.qdot;
  const Eigen::Vector2d com = center_of_mass(*model_, s.q);
  const double com_x = com.x();
  ph.com_height = com.y() - foot.y();
  const double com_vx = com_jacobian(*model_, s.q).row(0).dot(s.qdot);
  ph.start_position = {s.q[kBaseAngle], com_x - foot.x(), s.q[kBaseY] - foot.y()};
  ph.start_velocity = {s.qdot[kBaseAngle], com_vx - foot_vel.x(), s.qdot[kBaseY] - foot_vel.y()};
  return ph;
}

GaitPhaseState GaitController::begin_single(const State& s, Side stance, long tick) const {
  GaitPhaseState ph;
  ph.phase = GaitPhase::kSingle;
  ph.lead = stance;
  ph.start_tick = tick;
  ph.initial = false;
  ph.duration = gait_.single_duration();
  const Eigen::Vector2d rel =
      foot_position(*model_, s.q, other(stance)) - foot_position(*model_, s.q, stance);
  // Foot placement: the center of mass's miss of the liftoff target is
  // carried to touchdown with the pendulum about the stance foot, and the step
  // is lengthened by the resulting shift of the capture point.
  const Eigen::Vector2d foot = foot_position(*model_, s.q, stance);
  const Eigen::Vector2d com = center_of_mass(*model_, s.q) - foot;
  const double com_vx = com_jacobian(*model_, s.q).row(0).dot(s.qdot);
  const double omega = std::sqrt(model_->gravity / com.y());
  const double miss = (com.x() + gait_.liftoff_com_offset) + (com_vx - gait_.liftoff_com_speed) / omega;
  const double shift = std::clamp(miss * std::exp(omega * ph.duration), -kMaxStepShift * gait_.step_length,
                                  kMaxStepShift * gait_.step_length);
  ph.start_position = {rel.x(), rel.y(), gait_.step_length + shift};
  ph.start_velocity.setZero();
  return ph;
}

ControlOutput GaitController::command(const State& s, const ContactSet& contacts,
                                      const GaitPhaseState& phase, long tick,
                                      const ConstraintStabilization& stabilization) const {
  const WalkerModel& model = *model_;
  const double t = static_cast<double>(tick - phase.start_tick) / gait_.rate;
  const Side lead = phase.lead;
  const Side trail = phase.trailing();

  const Matrix27d A_lead = foot_jacobian(model, s.q, lead);
  const Eigen::Vector2d Adot_lead_qdot = foot_jacobian_dot(model, s.q, s.qdot, lead) * s.qdot;
  const Eigen::Vector2d lead_foot = foot_position(model, s.q, lead);

  RowVector7d e_angle = RowVector7d::Zero();
  e_angle[kBaseAngle] = 1.0;
  RowVector7d e_x = RowVector7d::Zero();
  e_x[kBaseX] = 1.0;
  RowVector7d e_y = RowVector7d::Zero();
  e_y[kBaseY] = 1.0;

  std::vector<TrackedOutput> outputs;

  if (phase.phase == GaitPhase::kSingle) {
    const Matrix27d A_swing = foot_jacobian(model, s.q, trail);
    const Eigen::Vector2d Adot_swing_qdot = foot_jacobian_dot(model, s.q, s.qdot, trail) * s.qdot;
    const Eigen::Vector2d rel = foot_position(model, s.q, trail) - lead_foot;
    const auto swing =
        swing_reference(gait_, phase.start_position.x(), phase.start_position.z(), t);

    outputs.push_back({e_angle, 0.0, s.q[kBaseAngle], {0.0, 0.0, 0.0}});
    outputs.push_back({e_y - A_lead.row(1), -Adot_lead_qdot.y(), s.q[kBaseY] - lead_foot.y(),
                       {gait_.hip_height, 0.0, 0.0}});
    outputs.push_back({A_swing.row(0) - A_lead.row(0), Adot_swing_qdot.x() - Adot_lead_qdot.x(),
                       rel.x(), swing[0]});
    outputs.push_back({A_swing.row(1) - A_lead.row(1), Adot_swing_qdot.y() - Adot_lead_qdot.y(),
                       rel.y(), swing[1]});
  } else {
    const Eigen::Vector3d& p0 = phase.start_position;
    const Eigen::Vector3d& v0 = phase.start_velocity;
    ReferencePoint angle_ref{p0[0], 0.0, 0.0};
    ReferencePoint x_ref{p0[1], 0.0, 0.0};
    ReferencePoint y_ref{p0[2], 0.0, 0.0};
    if (!gait_.standing()) {
      const double T = phase.duration;
      angle_ref = hermite(p0[0], v0[0], 0.0, 0.0, T, t);
      // The COM reference ends kUnloadHold early, at the state from which a
      // point-foot pendulum on the lead foot reaches the liftoff target. The
      // trailing foot is then held unloaded and the COM left to that pendulum.
      const double omega = std::sqrt(model.gravity / phase.com_height);
      const double c = std::cosh(omega * kUnloadHold);
      const double sh = std::sinh(omega * kUnloadHold);
      const double x_T = -gait_.liftoff_com_offset;
      const double v_T = gait_.liftoff_com_speed;
      const double x_h = x_T * c - v_T / omega * sh;
      const double v_h = v_T * c - x_T * omega * sh;
      x_ref = quintic(p0[1], v0[1], 0.0, x_h, v_h, omega * omega * x_h, T - kUnloadHold, t);
      y_ref = hermite(p0[2], v0[2], gait_.hip_height, 0.0, T, t);
    }
    const Matrix27d J_com = com_jacobian(model, s.q);
    const double com_bias = com_jacobian_dot(model, s.q, s.qdot).row(0).dot(s.qdot);
    outputs.push_back({e_angle, 0.0, s.q[kBaseAngle], angle_ref});
    outputs.push_back({J_com.row(0) - A_lead.row(0), com_bias - Adot_lead_qdot.x(),
                       center_of_mass(model, s.q).x() - lead_foot.x(), x_ref});
    outputs.push_back({e_y - A_lead.row(1), -Adot_lead_qdot.y(), s.q[kBaseY] - lead_foot.y(), y_ref});
  }

  const AffineDynamics dyn = affine_dynamics(model, s.q, s.qdot, contacts, stabilization);
  Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
  Eigen::Vector4d rhs_ff = Eigen::Vector4d::Zero();
  Eigen::Vector4d rhs_fb = Eigen::Vector4d::Zero();
  ControlOutput out;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& o = outputs[i];
    T.row(i) = o.J * dyn.Q;
    rhs_ff[i] = o.ref.a - o.J.dot(dyn.qddot0) - o.Jdot_qdot;
    const double velocity = o.J.dot(s.qdot);
    rhs_fb[i] = gait_.pd_gains.kp * (o.ref.p - o.value) + gait_.pd_gains.kd * (o.ref.v - velocity);
    out.position_error[i] = o.ref.p - o.value;
    out.reference[i] = o.ref.p;
  }
  if (outputs.size() == 4) {
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(T);
    if (!lu.isInvertible()) throw std::runtime_error("gait controller output map is singular");
    out.tau_feedforward = lu.solve(rhs_ff);
    out.tau = lu.solve(rhs_ff + rhs_fb);
    return out;
  }

  // Dual support. The vertical reactions follow from the three tracked
  // outputs alone, and the fourth torque direction only squeezes the feet
  // horizontally. It is used to split the horizontal force in proportion to
  // the vertical load. When tracking the center of mass would take the
  // trailing foot's share of vertical load outside [lo, hi], the COM row is
  // traded for a row holding the share at the bound.
  if (contacts.count() != 2) throw std::logic_error("dual-support control needs both feet pinned");
  const int tr_y = vertical_row(contacts, trail);
  const int ld_y = vertical_row(contacts, lead);
  const int tr_x = tr_y - 1;
  const int ld_x = ld_y - 1;
  auto split_row = [&](int tr, int ld, double w, Eigen::Matrix4d& Ts, Eigen::Vector4d& r, int row) {
    Ts.row(row) = dyn.F.row(tr) - w * (dyn.F.row(tr) + dyn.F.row(ld));
    r[row] = -(dyn.f0[tr] - w * (dyn.f0[tr] + dyn.f0[ld]));
  };
  auto solve = [&](const Eigen::Vector4d& rhs, double squeeze, std::optional<double> load) {
    Eigen::Matrix4d Ts = T;
    Eigen::Vector4d r = rhs;
    split_row(tr_x, ld_x, squeeze, Ts, r, 3);
    if (load) split_row(tr_y, ld_y, *load, Ts, r, 1);
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(Ts);
    if (!lu.isInvertible()) throw std::runtime_error("gait controller output map is singular");
    return Eigen::Vector4d(lu.solve(r));
  };
  auto vertical_share = [&](const Eigen::Vector4d& tau) {
    const Eigen::VectorXd f = dyn.f0 + dyn.F * tau;
    const double total = f[tr_y] + f[ld_y];
    return total > 0.0 ? f[tr_y] / total : 0.5;
  };

  const double to_hold = phase.duration - kUnloadHold - t;
  const bool hold = !gait_.standing() && to_hold <= 0.0;
  const double ramp = gait_.standing() ? 1.0 : std::clamp(to_hold / kUnloadRamp, 0.0, 1.0);
  const double lo = kMinLoadShare * ramp;
  const double hi = 1.0 - kMinLoadShare;

  const Eigen::Vector4d full_rhs = rhs_ff + rhs_fb;
  const double wanted = vertical_share(solve(full_rhs, 0.0, std::nullopt));
  std::optional<double> load;
  double share = wanted;
  if (hold) {
    share = 0.0;
    load = share;
    out.position_error[1] = 0.0;
  } else if (wanted < lo || wanted > hi) {
    share = std::clamp(wanted, lo, hi);
    load = share;
    out.position_error[1] = 0.0;
  }
  out.tau = solve(full_rhs, share, load);
  const double share_ff = load ? share : std::clamp(vertical_share(solve(rhs_ff, 0.0, std::nullopt)), 0.0, 1.0);
  out.tau_feedforward = solve(rhs_ff, share_ff, load);
  out.reference[3] = share;
  return out;
}

State standing_state(const WalkerModel& model, double hip_height, double left_foot_x,
                     double right_foot_x) {
  State s;
  s.q[kBaseY] = hip_height;
  const Eigen::Vector2d left =
      leg_angles(model.link_lengths[kLeftThigh], model.link_lengths[kLeftShank], left_foot_x, -hip_height);
  const Eigen::Vector2d right = leg_angles(model.link_lengths[kRightThigh],
                                           model.link_lengths[kRightShank], right_foot_x, -hip_height);
  s.q[kLeftHip] = left[0];
  s.q[kLeftKnee] = left[1] - left[0];
  s.q[kRightHip] = right[0];
  s.q[kRightKnee] = right[1] - right[0];
  return s;
}

}  // namespace contact_est
