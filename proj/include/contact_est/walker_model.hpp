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
#include <string>

#include <Eigen/Dense>

namespace contact_est {

constexpr int kDof = 7;
constexpr int kReducedDof = 5;
constexpr int kActuated = 4;
constexpr int kLinks = 5;

using Vector7d = Eigen::Matrix<double, kDof, 1>;
using Matrix7d = Eigen::Matrix<double, kDof, kDof>;
using Vector5d = Eigen::Matrix<double, kReducedDof, 1>;
using Matrix5d = Eigen::Matrix<double, kReducedDof, kReducedDof>;
using Vector4d = Eigen::Matrix<double, kActuated, 1>;
using Matrix27d = Eigen::Matrix<double, 2, kDof>;
using Matrix75d = Eigen::Matrix<double, kDof, kReducedDof>;
using Matrix57d = Eigen::Matrix<double, kReducedDof, kDof>;
using Matrix74d = Eigen::Matrix<double, kDof, kActuated>;

class KeyValueConfig;

/// Generalized coordinate indices. The base is the hip point of the torso.
enum Coord : int { kBaseX = 0, kBaseY, kBaseAngle, kLeftHip, kLeftKnee, kRightHip, kRightKnee };

/// Link indices into the WalkerModel parameter arrays.
enum Link : int { kTorso = 0, kLeftThigh, kLeftShank, kRightThigh, kRightShank };

enum class Side { kLeft, kRight };

inline Side other(Side s) { return s == Side::kLeft ? Side::kRight : Side::kLeft; }
const char* to_string(Side s);

/// Physical parameters of the planar five-link biped.
///
/// Angles are counter-clockwise positive. The torso points up from the hip at
/// angle theta_b from vertical; each leg hangs down from the hip and all joint
/// angles are zero with straight hips and knees.
struct WalkerModel {
  std::array<double, kLinks> link_masses{1.0, 1.0, 1.0, 1.0, 1.0};
  std::array<double, kLinks> link_lengths{0.5, 0.5, 0.5, 0.5, 0.5};
  /// Distance from the proximal joint to the link center of mass.
  std::array<double, kLinks> com_offsets{0.25, 0.25, 0.25, 0.25, 0.25};
  /// Rotational inertia about the link center of mass (uniform rod by default).
  std::array<double, kLinks> link_inertias{1.0 / 48.0, 1.0 / 48.0, 1.0 / 48.0, 1.0 / 48.0,
                                           1.0 / 48.0};
  double gravity = 9.81;
  /// Maps the four joint torques into the seven generalized forces (B^T).
  Matrix74d actuation = default_actuation();

  static Matrix74d default_actuation();

  /// Reads `model.*` keys; anything absent keeps its default.
  static WalkerModel from_config(const KeyValueConfig& config);

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;

  double total_mass() const;
  double leg_length(Side side) const;
};

struct DynamicsTerms {
  Matrix7d M;
  Matrix7d C;
  Vector7d G;
};

struct ContactJacobians {
  Matrix27d A_left;
  Matrix27d A_right;
  Matrix27d Adot_left;
  Matrix27d Adot_right;
};

Matrix7d mass_matrix(const WalkerModel& model, const Vector7d& q);

/// Coriolis matrix from the Christoffel symbols of M, so Mdot = C + C^T.
Matrix7d coriolis_matrix(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot);

Vector7d gravity_vector(const WalkerModel& model, const Vector7d& q);

DynamicsTerms dynamics_terms(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot);

double kinetic_energy(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot);
double potential_energy(const WalkerModel& model, const Vector7d& q);

Eigen::Vector2d foot_position(const WalkerModel& model, const Vector7d& q, Side side);
Matrix27d foot_jacobian(const WalkerModel& model, const Vector7d& q, Side side);
Matrix27d foot_jacobian_dot(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot,
                            Side side);
ContactJacobians contact_jacobians(const WalkerModel& model, const Vector7d& q,
                                   const Vector7d& qdot);

Eigen::Vector2d center_of_mass(const WalkerModel& model, const Vector7d& q);
Matrix27d com_jacobian(const WalkerModel& model, const Vector7d& q);
Matrix27d com_jacobian_dot(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot);

/// (A_left - A_right) * qdot.
Eigen::Vector2d relative_foot_velocity(const WalkerModel& model, const Vector7d& q,
                                       const Vector7d& qdot);

}  // namespace contact_est
