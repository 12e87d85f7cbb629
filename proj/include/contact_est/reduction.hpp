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

#include <stdexcept>

#include "contact_est/walker_model.hpp"

namespace contact_est {

/// The stacked matrix [A; Y] is numerically singular, so this contact
/// hypothesis cannot be evaluated on this tick.
class SingularStack : public std::runtime_error {
 public:
  explicit SingularStack(double rcond);
  double reciprocal_condition() const { return rcond_; }

 private:
  double rcond_;
};

/// Reciprocal condition number below which [A; Y] is treated as singular.
constexpr double kMinStackRcond = 1e-8;

/// Constraint-consistent reduction of the walker dynamics for one stance foot.
struct ReducedModel {
  Side mode = Side::kLeft;
  Matrix57d Y;
  Matrix75d H;
  Matrix75d Hdot;
  Matrix5d M_red;
  Matrix5d C_red;
  Vector5d G_red;
  Vector5d tau_red;
};

/// Rows pick (theta_b, theta_1..theta_4); identical for both stance sides.
Matrix57d selection_matrix(Side mode);

/// H = [A; Y]^-1 [0; I], so A H = 0 and Y H = I.
Matrix75d reduction_map(const Matrix27d& A, const Matrix57d& Y);

/// Hdot = -[A; Y]^-1 [Adot; 0] H, from differentiating [A; Y] H = [0; I].
Matrix75d reduction_map_dot(const Matrix27d& A, const Matrix27d& Adot, const Matrix57d& Y,
                            const Matrix75d& H);

ReducedModel reduce_dynamics(const DynamicsTerms& terms, const Matrix75d& H, const Matrix75d& Hdot,
                             const Vector4d& tau_mot, const Matrix74d& actuation);

/// Full configuration implied by reduced coordinates y. The base position does
/// not enter any dynamics term, so it is placed at the origin.
Vector7d configuration_from_reduced(const Vector5d& y);

/// Builds the reduced model for a stance hypothesis straight from measured
/// reduced coordinates, reconstructing qdot = H ydot under that hypothesis.
ReducedModel reduce_for_stance(const WalkerModel& model, Side stance, const Vector5d& y,
                               const Vector5d& ydot, const Vector4d& tau_mot);

}  // namespace contact_est
