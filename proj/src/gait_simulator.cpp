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

#include "contact_est/gait_simulator.hpp"

#include <cmath>
#include <string>

#include "contact_est/measurement_noise.hpp"

namespace contact_est {

namespace {

constexpr double kUnilateralTolerance = 1e-9;
constexpr double kMinHipClearance = 0.3;
constexpr double kMaxTorsoAngle = 1.2;
constexpr double kMaxSpeed = 50.0;
constexpr double kMaxSwingOverrun = 2.0;

ConstraintStabilization stabilization_for(const SimState& s) {
  ConstraintStabilization stab = s.pins;
  stab.alpha = kBaumgarteAlpha;
  stab.beta = kBaumgarteBeta;
  stab.enabled = true;
  return stab;
}

void check_divergence(const WalkerModel& model, const SimState& s) {
  const auto& q = s.x.q;
  if (!q.allFinite() || !s.x.qdot.allFinite()) throw SimulationDiverged(s.tick, "non-finite state");
  const double lowest_foot = std::min(foot_position(model, q, Side::kLeft).y(),
                                      foot_position(model, q, Side::kRight).y());
  if (q[kBaseY] - lowest_foot < kMinHipClearance) throw SimulationDiverged(s.tick, "hip collapsed");
  if (std::abs(q[kBaseAngle]) > kMaxTorsoAngle) throw SimulationDiverged(s.tick, "torso fell over");
  if (s.x.qdot.norm() > kMaxSpeed) throw SimulationDiverged(s.tick, "velocity blew up");
}

}  // namespace

SimulationDiverged::SimulationDiverged(long tick, const std::string& why)
    : std::runtime_error("simulation diverged at tick " + std::to_string(tick) + ": " + why),
      tick_(tick) {}

SimState initial_sim_state(const WalkerModel& model, const GaitConfig& gait) {
  const double half_stance = gait.standing() ? 0.1 : 0.5 * gait.step_length;
  SimState s;
  // The left foot starts in front, so the right foot swings first. When
  // walking, the hip is shifted until the center of mass sits
  // start_com_offset behind the left foot.
  double shift = 0.0;
  if (!gait.standing()) {
    for (int it = 0; it < 50; ++it) {
      const State x = standing_state(model, gait.hip_height, half_stance - shift, -half_stance - shift);
      const double err = center_of_mass(model, x.q).x() - foot_position(model, x.q, Side::kLeft).x() +
                         gait.start_com_offset;
      if (std::abs(err) < 1e-12) break;
      shift -= err;
    }
  }
  s.x = standing_state(model, gait.hip_height, half_stance - shift, -half_stance - shift);
  if (!gait.standing()) {
    // Both feet still, torso upright, hip height steady, COM moving forward.
    Matrix7d K;
    Vector7d rhs = Vector7d::Zero();
    K.topRows<4>() = stacked_jacobian(model, s.x.q, {true, true});
    K.row(4) = Vector7d::Unit(kBaseAngle).transpose();
    K.row(5) = Vector7d::Unit(kBaseY).transpose();
    K.row(6) = com_jacobian(model, s.x.q).row(0);
    rhs[6] = gait.start_com_speed;
    s.x.qdot = K.fullPivLu().solve(rhs);
  }
  s.contacts = {true, true};
  s.pins.anchors = {foot_position(model, s.x.q, Side::kLeft),
                    foot_position(model, s.x.q, Side::kRight)};
  s.tick = 0;
  GaitController controller(model, gait);
  s.phase = controller.begin_dual(s.x, Side::kLeft, 0, true);
  return s;
}

StepRecord hybrid_step(SimState& st, const GaitController& controller, double dt) {
  const GaitConfig& gait = controller.gait();
  const WalkerModel& model = controller.model();
  StepRecord rec;

  if (!gait.standing() && st.phase.phase == GaitPhase::kDual &&
      st.tick - st.phase.start_tick >= std::lround(st.phase.duration * gait.rate)) {
    st.contacts.set(st.phase.trailing(), false);
    st.phase = controller.begin_single(st.x, st.phase.lead, st.tick);
    rec.liftoff = ContactEvent::kCommandedLiftoff;
  }
  if (st.phase.phase == GaitPhase::kSingle &&
      st.tick - st.phase.start_tick > std::lround(kMaxSwingOverrun * st.phase.duration * gait.rate)) {
    throw SimulationDiverged(st.tick, "swing foot never touched down");
  }

  ConstraintStabilization stab = stabilization_for(st);
  rec.control = controller.command(st.x, st.contacts, st.phase, st.tick, stab);
  ForwardDynamicsResult fd =
      constrained_forward_dynamics(model, st.x.q, st.x.qdot, rec.control.tau, st.contacts, stab);

  if (st.contacts.count() == 2) {
    for (Side side : {Side::kLeft, Side::kRight}) {
      if (fd.force.on(side).y() >= -kUnilateralTolerance) continue;
      st.contacts.set(side, false);
      st.phase = controller.begin_single(st.x, other(side), st.tick);
      rec.liftoff = ContactEvent::kUnilateralLiftoff;
      rec.control = controller.command(st.x, st.contacts, st.phase, st.tick, stab);
      fd = constrained_forward_dynamics(model, st.x.q, st.x.qdot, rec.control.tau, st.contacts, stab);
      break;
    }
  }
  for (Side side : {Side::kLeft, Side::kRight}) {
    if (st.contacts.has(side) && fd.force.on(side).y() < -kUnilateralTolerance) {
      throw SimulationDiverged(st.tick, std::string("stance foot ") + to_string(side) +
                                            " would leave the ground");
    }
  }
  rec.applied_contacts = st.contacts;
  rec.force = fd.force;

  State next;
  next.qdot = st.x.qdot + dt * fd.qddot;
  next.q = st.x.q + dt * next.qdot;

  Side landed = Side::kLeft;
  for (Side side : {Side::kLeft, Side::kRight}) {
    if (st.contacts.has(side)) continue;
    const double h0 = foot_position(model, st.x.q, side).y();
    const double h1 = foot_position(model, next.q, side).y();
    if (!(h0 > 0.0 && h1 <= 0.0)) continue;
    const double frac = h0 / (h0 - h1);
    const Vector7d q_contact = st.x.q + frac * dt * next.qdot;
    st.contacts.set(side, true);
    st.pins.anchors[side == Side::kLeft ? 0 : 1] = {foot_position(model, q_contact, side).x(), 0.0};
    rec.impact_energy_before = kinetic_energy(model, q_contact, next.qdot);
    next.qdot = impact_map(model, q_contact, next.qdot, st.contacts);
    rec.impact_energy_after = kinetic_energy(model, q_contact, next.qdot);
    next.q = q_contact + (1.0 - frac) * dt * next.qdot;
    rec.touchdown = true;
    landed = side;
    break;
  }

  project_onto_constraints(model, st.contacts, st.pins, next.q, next.qdot);
  st.x = next;
  ++st.tick;
  if (rec.touchdown) {
    st.phase = controller.begin_dual(st.x, landed, st.tick, false);
  }
  check_divergence(model, st);
  return rec;
}

std::vector<double> TrialData::times() const {
  std::vector<double> t;
  t.reserve(clean_frames.size());
  for (const auto& f : clean_frames) t.push_back(f.t);
  return t;
}

std::vector<ContactMode> TrialData::truth_modes() const {
  std::vector<ContactMode> m;
  m.reserve(ticks.size());
  for (const auto& tt : ticks) m.push_back(tt.contacts.mode());
  return m;
}

MeasurementFrame measure(const State& x, const Vector4d& tau, double t) {
  MeasurementFrame f;
  f.t = t;
  f.y = x.q.tail<kReducedDof>();
  f.ydot = x.qdot.tail<kReducedDof>();
  f.tau_mot = tau;
  return f;
}

TrialData simulate_trial(const WalkerModel& model, const GaitConfig& gait, double snr_db,
                         std::uint64_t seed) {
  model.validate();
  gait.validate();
  const long n = gait.frame_count();
  const double dt = 1.0 / gait.rate;
  const GaitController controller(model, gait);
  SimState st = initial_sim_state(model, gait);

  TrialData out;
  out.clean_frames.reserve(n);
  out.ticks.reserve(n);
  for (long k = 0; k < n; ++k) {
    TickTruth tt;
    tt.q = st.x.q;
    tt.qdot = st.x.qdot;
    tt.contacts = st.contacts;
    tt.step = hybrid_step(st, controller, dt);
    out.clean_frames.push_back(measure({tt.q, tt.qdot}, tt.step.control.tau, k / gait.rate));
    out.ticks.push_back(tt);
  }
  out.t_end = n / gait.rate;
  const auto times = out.times();
  out.truth = labels_from_ticks(times, out.truth_modes(), out.t_end);
  out.frames = add_noise(out.clean_frames, snr_db, seed);
  return out;
}

}  // namespace contact_est
