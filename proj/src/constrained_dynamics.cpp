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

#include "contact_est/constrained_dynamics.hpp"

namespace contact_est {

namespace {

constexpr double kMinDelassusRcond = 1e-10;

std::array<Side, 2> kSides{Side::kLeft, Side::kRight};

Eigen::VectorXd stacked_bias(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot,
                             const ContactSet& contacts, const ConstraintStabilization& stab) {
  Eigen::VectorXd rhs(2 * contacts.count());
  int row = 0;
  for (Side side : kSides) {
    if (!contacts.has(side)) continue;
    const Matrix27d A = foot_jacobian(model, q, side);
    Eigen::Vector2d r = -foot_jacobian_dot(model, q, qdot, side) * qdot;
    if (stab.enabled) {
      r -= 2.0 * stab.alpha * (A * qdot);
      r -= stab.beta * stab.beta * (foot_position(model, q, side) - stab.anchor(side));
    }
    rhs.segment<2>(row) = r;
    row += 2;
  }
  return rhs;
}

Eigen::LDLT<Eigen::MatrixXd> factor_delassus(const Eigen::MatrixXd& S) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() >= kMinDelassusRcond)) {
    throw SingularConstraint("active foot constraints are rank deficient");
  }
  return ldlt;
}

}  // namespace

ContactMode ContactSet::mode() const {
  if (left && right) return ContactMode::kDual;
  if (left) return ContactMode::kLeft;
  if (right) return ContactMode::kRight;
  throw std::logic_error("no foot in contact; flight is not a modeled contact mode");
}

ContactSet ContactSet::from_mode(ContactMode mode) {
  switch (mode) {
    case ContactMode::kLeft:
      return {true, false};
    case ContactMode::kRight:
      return {false, true};
    case ContactMode::kDual:
      return {true, true};
  }
  return {};
}

Eigen::MatrixXd stacked_jacobian(const WalkerModel& model, const Vector7d& q,
                                 const ContactSet& contacts) {
  Eigen::MatrixXd A(2 * contacts.count(), kDof);
  int row = 0;
  for (Side side : kSides) {
    if (!contacts.has(side)) continue;
    A.middleRows<2>(row) = foot_jacobian(model, q, side);
    row += 2;
  }
  return A;
}

AffineDynamics affine_dynamics(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot,
                               const ContactSet& contacts,
                               const ConstraintStabilization& stabilization) {
  const Matrix7d M = mass_matrix(model, q);
  const Vector7d bias = -coriolis_matrix(model, q, qdot) * qdot - gravity_vector(model, q);
  const Eigen::LLT<Matrix7d> llt(M);
  const Vector7d Minv_bias = llt.solve(bias);
  const Matrix74d Minv_B = llt.solve(model.actuation);

  AffineDynamics out;
  out.contacts = contacts;
  if (contacts.count() == 0) {
    out.qddot0 = Minv_bias;
    out.Q = Minv_B;
    out.f0.resize(0);
    out.F.resize(0, kActuated);
    return out;
  }

  const Eigen::MatrixXd A = stacked_jacobian(model, q, contacts);
  const Eigen::MatrixXd Minv_At = llt.solve(A.transpose());
  const Eigen::MatrixXd S = A * Minv_At;
  const auto ldlt = factor_delassus(S);
  const Eigen::VectorXd rhs = stacked_bias(model, q, qdot, contacts, stabilization);

  out.f0 = ldlt.solve(rhs - A * Minv_bias);
  out.F = -ldlt.solve(A * Minv_B);
  out.qddot0 = Minv_bias + Minv_At * out.f0;
  out.Q = Minv_B + Minv_At * out.F;
  return out;
}

ForwardDynamicsResult constrained_forward_dynamics(const WalkerModel& model, const Vector7d& q,
                                                   const Vector7d& qdot, const Vector4d& tau,
                                                   const ContactSet& contacts,
                                                   const ConstraintStabilization& stabilization) {
  const Matrix7d M = mass_matrix(model, q);
  const Vector7d rhs = model.actuation * tau - coriolis_matrix(model, q, qdot) * qdot -
                       gravity_vector(model, q);
  const Eigen::LLT<Matrix7d> llt(M);

  ForwardDynamicsResult out;
  if (contacts.count() == 0) {
    out.qddot = llt.solve(rhs);
    return out;
  }
  const Eigen::MatrixXd A = stacked_jacobian(model, q, contacts);
  const Eigen::MatrixXd Minv_At = llt.solve(A.transpose());
  const auto ldlt = factor_delassus(A * Minv_At);
  const Vector7d Minv_rhs = llt.solve(rhs);
  const Eigen::VectorXd f =
      ldlt.solve(stacked_bias(model, q, qdot, contacts, stabilization) - A * Minv_rhs);
  out.qddot = Minv_rhs + Minv_At * f;
  int row = 0;
  for (Side side : kSides) {
    if (!contacts.has(side)) continue;
    out.force.on(side) = f.segment<2>(row);
    row += 2;
  }
  return out;
}

Vector7d impact_map(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot_minus,
                    const ContactSet& contacts) {
  if (contacts.count() == 0) return qdot_minus;
  const Eigen::LLT<Matrix7d> llt(mass_matrix(model, q));
  const Eigen::MatrixXd A = stacked_jacobian(model, q, contacts);
  const Eigen::MatrixXd Minv_At = llt.solve(A.transpose());
  const auto ldlt = factor_delassus(A * Minv_At);
  return qdot_minus - Minv_At * ldlt.solve(A * qdot_minus);
}

void project_onto_constraints(const WalkerModel& model, const ContactSet& contacts,
                              const ConstraintStabilization& pins, Vector7d& q, Vector7d& qdot) {
  if (contacts.count() == 0) return;
  constexpr int kMaxIterations = 4;
  constexpr double kPositionTolerance = 1e-13;
  for (int it = 0; it < kMaxIterations; ++it) {
    Eigen::VectorXd phi(2 * contacts.count());
    int row = 0;
    for (Side side : kSides) {
      if (!contacts.has(side)) continue;
      phi.segment<2>(row) = foot_position(model, q, side) - pins.anchor(side);
      row += 2;
    }
    if (phi.lpNorm<Eigen::Infinity>() < kPositionTolerance) break;
    const Eigen::LLT<Matrix7d> llt(mass_matrix(model, q));
    const Eigen::MatrixXd A = stacked_jacobian(model, q, contacts);
    const Eigen::MatrixXd Minv_At = llt.solve(A.transpose());
    q -= Minv_At * factor_delassus(A * Minv_At).solve(phi);
  }
  qdot = impact_map(model, q, qdot, contacts);
}

State semi_implicit_euler_step(const WalkerModel& model, const State& s, const Vector4d& tau,
                               const ContactSet& contacts, double dt,
                               const ConstraintStabilization& stabilization) {
  const auto fd = constrained_forward_dynamics(model, s.q, s.qdot, tau, contacts, stabilization);
  State next;
  next.qdot = s.qdot + dt * fd.qddot;
  next.q = s.q + dt * next.qdot;
  return next;
}

State rk4_step(const WalkerModel& model, const State& s, const Vector4d& tau,
               const ContactSet& contacts, double dt,
               const ConstraintStabilization& stabilization) {
  auto accel = [&](const Vector7d& q, const Vector7d& qdot) {
    return constrained_forward_dynamics(model, q, qdot, tau, contacts, stabilization).qddot;
  };
  const Vector7d k1q = s.qdot;
  const Vector7d k1v = accel(s.q, s.qdot);
  const Vector7d k2q = s.qdot + 0.5 * dt * k1v;
  const Vector7d k2v = accel(s.q + 0.5 * dt * k1q, k2q);
  const Vector7d k3q = s.qdot + 0.5 * dt * k2v;
  const Vector7d k3v = accel(s.q + 0.5 * dt * k2q, k3q);
  const Vector7d k4q = s.qdot + dt * k3v;
  const Vector7d k4v = accel(s.q + dt * k3q, k4q);
  State next;
  next.q = s.q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  next.qdot = s.qdot + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return next;
}

}  // namespace contact_est
