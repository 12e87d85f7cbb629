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
#include <stdexcept>

#include "contact_est/fusion.hpp"
#include "contact_est/walker_model.hpp"

namespace contact_est {

class SingularConstraint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which feet are pinned to the ground.
struct ContactSet {
  bool left = false;
  bool right = false;

  bool has(Side side) const { return side == Side::kLeft ? left : right; }
  void set(Side side, bool value) { (side == Side::kLeft ? left : right) = value; }
  int count() const { return int(left) + int(right); }
  ContactMode mode() const;
  bool operator==(const ContactSet&) const = default;

  static ContactSet from_mode(ContactMode mode);
};

/// Ground reaction on each foot (N, world frame, +y pushes the foot up). Free
/// feet carry zero.
struct ConstraintForce {
  std::array<Eigen::Vector2d, 2> reaction{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};

  const Eigen::Vector2d& on(Side side) const { return reaction[side == Side::kLeft ? 0 : 1]; }
  Eigen::Vector2d& on(Side side) { return reaction[side == Side::kLeft ? 0 : 1]; }
};

/// Pin locations and Baumgarte gains used to pull position/velocity drift of
/// active constraints back to zero.
struct ConstraintStabilization {
  std::array<Eigen::Vector2d, 2> anchors{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
  double alpha = 0.0;  // velocity gain (1/s)
  double beta = 0.0;   // position gain (1/s)
  bool enabled = false;

  const Eigen::Vector2d& anchor(Side side) const { return anchors[side == Side::kLeft ? 0 : 1]; }
};

/// qddot = qddot0 + Q tau and reaction = f0 + F tau for a fixed state and
/// contact set. Reactions stack the active feet, left first.
struct AffineDynamics {
  ContactSet contacts;
  Vector7d qddot0;
  Matrix74d Q;
  Eigen::VectorXd f0;
  Eigen::MatrixXd F;
};

AffineDynamics affine_dynamics(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot,
                               const ContactSet& contacts,
                               const ConstraintStabilization& stabilization = {});

struct ForwardDynamicsResult {
  Vector7d qddot;
  ConstraintForce force;
};

/// Solves M qddot + C qdot + G = B^T tau + A^T f together with
/// A qddot + Adot qdot = 0 for the active feet.
ForwardDynamicsResult constrained_forward_dynamics(const WalkerModel& model, const Vector7d& q,
                                                   const Vector7d& qdot, const Vector4d& tau,
                                                   const ContactSet& contacts,
                                                   const ConstraintStabilization& stabilization = {});

/// Plastic impact onto the constraint set: qdot+ = (I - M^-1 A^T (A M^-1 A^T)^-1 A) qdot-.
Vector7d impact_map(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot_minus,
                    const ContactSet& contacts);

/// Pulls q back onto the pinned-foot manifold (M-weighted Gauss-Newton) and
/// projects qdot onto the constraint tangent space.
void project_onto_constraints(const WalkerModel& model, const ContactSet& contacts,
                              const ConstraintStabilization& pins, Vector7d& q, Vector7d& qdot);

/// Stacked Jacobian of the active feet (left first).
Eigen::MatrixXd stacked_jacobian(const WalkerModel& model, const Vector7d& q,
                                 const ContactSet& contacts);

struct State {
  Vector7d q = Vector7d::Zero();
  Vector7d qdot = Vector7d::Zero();
};

/// One semi-implicit Euler step with torque held over the step.
State semi_implicit_euler_step(const WalkerModel& model, const State& s, const Vector4d& tau,
                               const ContactSet& contacts, double dt,
                               const ConstraintStabilization& stabilization = {});

/// One classical Runge-Kutta step with torque held over the step.
State rk4_step(const WalkerModel& model, const State& s, const Vector4d& tau,
               const ContactSet& contacts, double dt,
               const ConstraintStabilization& stabilization = {});

}  // namespace contact_est
