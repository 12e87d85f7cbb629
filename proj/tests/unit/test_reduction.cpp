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

#include <doctest.h>

#include "contact_est/constrained_dynamics.hpp"
#include "contact_est/reduction.hpp"
#include "oracle.hpp"

using namespace contact_est;

TEST_CASE("selection matrix picks torso and joint angles") {
  for (Side s : {Side::kLeft, Side::kRight}) {
    const Matrix57d Y = selection_matrix(s);
    CHECK(Y.leftCols<2>().isZero(0.0));
    CHECK(Y.rightCols<5>().isIdentity(0.0));
    CHECK((Y * Y.transpose()).isIdentity(0.0));
  }
}

TEST_CASE("reduction map") {
  const WalkerModel m;
  std::mt19937_64 rng(17);

  SUBCASE("block identity case") {
    Matrix27d A = Matrix27d::Zero();
    A.leftCols<2>().setIdentity();
    const Matrix75d H = reduction_map(A, selection_matrix(Side::kLeft));
    CHECK(H.topRows<2>().isZero(0.0));
    CHECK(H.bottomRows<5>().isIdentity(0.0));
    CHECK(reduction_map_dot(A, Matrix27d::Zero(), selection_matrix(Side::kLeft), H).isZero(0.0));
  }

  SUBCASE("defining identities and dense inverse") {
    for (int i = 0; i < 200; ++i) {
      const Vector7d q = oracle::random_q(rng);
      for (Side s : {Side::kLeft, Side::kRight}) {
        const Matrix27d A = foot_jacobian(m, q, s);
        const Matrix57d Y = selection_matrix(s);
        Matrix7d stack;
        stack << A, Y;
        CHECK(std::abs(stack.determinant()) > 1e-3);
        const Matrix75d H = reduction_map(A, Y);
        CHECK((A * H).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(((Y * H) - Matrix5d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
        const Matrix7d inv = stack.inverse();
        CHECK((H - inv.rightCols<5>()).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }

  SUBCASE("Hdot matches finite differences along the flow") {
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
      const Vector7d q = oracle::random_q(rng);
      const Vector7d v = oracle::random_qdot(rng);
      for (Side s : {Side::kLeft, Side::kRight}) {
        const Matrix57d Y = selection_matrix(s);
        const Matrix75d H = reduction_map(foot_jacobian(m, q, s), Y);
        const Matrix75d Hd = reduction_map_dot(foot_jacobian(m, q, s), foot_jacobian_dot(m, q, v, s), Y, H);
        const Matrix75d fd = (reduction_map(foot_jacobian(m, q + h * v, s), Y) -
                              reduction_map(foot_jacobian(m, q - h * v, s), Y)) /
                             (2 * h);
        CHECK((Hd - fd).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }

  SUBCASE("rank-deficient stack is rejected") {
    Matrix27d A = Matrix27d::Zero();
    A(0, kBaseAngle) = 1.0;  // duplicates a row of Y
    A(1, kBaseX) = 1.0;
    CHECK_THROWS_AS(reduction_map(A, selection_matrix(Side::kLeft)), SingularStack);
  }
}

TEST_CASE("reduced dynamics terms") {
  const WalkerModel m;
  std::mt19937_64 rng(19);

  SUBCASE("selection case keeps the joint block of M") {
    const Vector7d q = oracle::random_q(rng);
    const DynamicsTerms t = dynamics_terms(m, q, Vector7d::Zero());
    Matrix75d H = Matrix75d::Zero();
    H.bottomRows<5>().setIdentity();
    const ReducedModel r = reduce_dynamics(t, H, Matrix75d::Zero(), Vector4d::Zero(), m.actuation);
    CHECK((r.M_red - t.M.bottomRightCorner<5, 5>()).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("symmetric positive definite, zero innovation identity") {
    for (int i = 0; i < 50; ++i) {
      Vector5d y, yd;
      const Vector7d q = oracle::random_q(rng);
      y = q.tail<5>();
      yd = oracle::random_qdot(rng).tail<5>();
      const Vector4d tau = Vector4d::Random();
      for (Side s : {Side::kLeft, Side::kRight}) {
        const ReducedModel r = reduce_for_stance(m, s, y, yd, tau);
        CHECK((r.M_red - r.M_red.transpose()).isZero(0.0));
        CHECK(Eigen::SelfAdjointEigenSolver<Matrix5d>(r.M_red).eigenvalues().minCoeff() > 0.0);
        // Actuation reaches the reduced coordinates as joint torques only.
        CHECK((r.tau_red.tail<4>() - tau).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(r.tau_red[0]) < 1e-12);
        // Reduced Mdot = C_red + C_red^T along the constrained flow.
        const double h = 1e-6;
        const Vector5d ya = y + h * yd;
        const Vector5d yb = y - h * yd;
        const Matrix5d Md = (reduce_for_stance(m, s, ya, yd, tau).M_red -
                             reduce_for_stance(m, s, yb, yd, tau).M_red) /
                            (2 * h);
        CHECK((Md - r.C_red - r.C_red.transpose()).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }
}

namespace {

// Reduced acceleration for the stance foot pinned, torque held.
Vector5d reduced_accel(const WalkerModel& m, const Vector5d& y, const Vector5d& yd, const Vector4d& tau) {
  const ReducedModel r = reduce_for_stance(m, Side::kLeft, y, yd, tau);
  return r.M_red.ldlt().solve(r.tau_red - r.C_red * yd - r.G_red);
}

Vector4d hold_pose(const Vector5d& y, const Vector5d& yd, const Vector4d& pose) {
  return -30.0 * (y.tail<4>() - pose) - 3.0 * yd.tail<4>();
}

}  // namespace

TEST_CASE("reduced dynamics reproduce the full constrained dynamics over 1 s") {
  const WalkerModel m;
  Vector7d q;
  q << 0.0, 0.0, 0.05, 0.1, -0.2, -0.3, -0.4;
  // Pin the left foot at the origin.
  q.head<2>() -= foot_position(m, q, Side::kLeft);
  const Vector4d pose = q.tail<4>();

  Vector7d qd = Vector7d::Zero();
  qd.tail<5>() << 0.3, -0.2, 0.1, 0.4, 0.2;
  const Matrix75d H0 = reduction_map(foot_jacobian(m, q, Side::kLeft), selection_matrix(Side::kLeft));
  qd = H0 * qd.tail<5>().eval();

  State full{q, qd};
  Vector5d y = q.tail<5>();
  Vector5d yd = qd.tail<5>();
  const ContactSet left{true, false};
  const double dt = 1e-3;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vector4d tau = hold_pose(y, yd, pose);
    full = rk4_step(m, full, tau, left, dt);

    const Vector5d k1v = reduced_accel(m, y, yd, tau);
    const Vector5d k2v = reduced_accel(m, y + 0.5 * dt * yd, yd + 0.5 * dt * k1v, tau);
    const Vector5d k2p = yd + 0.5 * dt * k1v;
    const Vector5d k3v = reduced_accel(m, y + 0.5 * dt * k2p, yd + 0.5 * dt * k2v, tau);
    const Vector5d k3p = yd + 0.5 * dt * k2v;
    const Vector5d k4v = reduced_accel(m, y + dt * k3p, yd + dt * k3v, tau);
    const Vector5d k4p = yd + dt * k3v;
    y += dt / 6 * (yd + 2 * k2p + 2 * k3p + k4p);
    yd += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);

    Vector7d q_red = configuration_from_reduced(y);
    q_red.head<2>() -= foot_position(m, q_red, Side::kLeft);
    worst = std::max(worst, (q_red - full.q).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-6);
  // The walker really moved.
  CHECK((full.q - q).norm() > 1e-2);
}
