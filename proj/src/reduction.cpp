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

#include "contact_est/reduction.hpp"

#include <string>

namespace contact_est {

namespace {

Eigen::PartialPivLU<Matrix7d> factor_stack(const Matrix27d& A, const Matrix57d& Y) {
  Matrix7d stacked;
  stacked.topRows<2>() = A;
  stacked.bottomRows<kReducedDof>() = Y;
  Eigen::PartialPivLU<Matrix7d> lu(stacked);
  const double rcond = lu.rcond();
  if (!(rcond >= kMinStackRcond)) throw SingularStack(rcond);
  return lu;
}

}  // namespace

SingularStack::SingularStack(double rcond)
    : std::runtime_error("stacked constraint/selection matrix is singular (rcond = " +
                         std::to_string(rcond) + ")"),
      rcond_(rcond) {}

Matrix57d selection_matrix(Side /*mode*/) {
  Matrix57d Y = Matrix57d::Zero();
  Y.rightCols<kReducedDof>().setIdentity();
  return Y;
}

Matrix75d reduction_map(const Matrix27d& A, const Matrix57d& Y) {
  Eigen::Matrix<double, kDof, kReducedDof> rhs = Eigen::Matrix<double, kDof, kReducedDof>::Zero();
  rhs.bottomRows<kReducedDof>().setIdentity();
  return factor_stack(A, Y).solve(rhs);
}

Matrix75d reduction_map_dot(const Matrix27d& A, const Matrix27d& Adot, const Matrix57d& Y,
                            const Matrix75d& H) {
  Eigen::Matrix<double, kDof, kReducedDof> rhs = Eigen::Matrix<double, kDof, kReducedDof>::Zero();
  rhs.topRows<2>() = -Adot * H;
  return factor_stack(A, Y).solve(rhs);
}

ReducedModel reduce_dynamics(const DynamicsTerms& terms, const Matrix75d& H, const Matrix75d& Hdot,
                             const Vector4d& tau_mot, const Matrix74d& actuation) {
  ReducedModel r;
  r.Y = selection_matrix(r.mode);
  r.H = H;
  r.Hdot = Hdot;
  const Matrix75d MH = terms.M * H;
  r.M_red = H.transpose() * MH;
  r.M_red = 0.5 * (r.M_red + r.M_red.transpose()).eval();
  r.C_red = H.transpose() * terms.C * H + H.transpose() * terms.M * Hdot;
  r.G_red = H.transpose() * terms.G;
  r.tau_red = H.transpose() * (actuation * tau_mot);
  return r;
}

Vector7d configuration_from_reduced(const Vector5d& y) {
  Vector7d q = Vector7d::Zero();
  q.tail<kReducedDof>() = y;
  return q;
}

ReducedModel reduce_for_stance(const WalkerModel& model, Side stance, const Vector5d& y,
                               const Vector5d& ydot, const Vector4d& tau_mot) {
  const Vector7d q = configuration_from_reduced(y);
  const Matrix57d Y = selection_matrix(stance);
  const Matrix27d A = foot_jacobian(model, q, stance);
  const Matrix75d H = reduction_map(A, Y);
  const Vector7d qdot = H * ydot;
  const Matrix27d Adot = foot_jacobian_dot(model, q, qdot, stance);
  const Matrix75d Hdot = reduction_map_dot(A, Adot, Y, H);
  ReducedModel r = reduce_dynamics(dynamics_terms(model, q, qdot), H, Hdot, tau_mot, model.actuation);
  r.mode = stance;
  r.Y = Y;
  return r;
}

}  // namespace contact_est
