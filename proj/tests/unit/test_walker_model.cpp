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

#include <cmath>

#include "contact_est/config.hpp"
#include "oracle.hpp"

using namespace contact_est;

namespace {

const Vector7d kRefQ = (Vector7d() << 0, 1, 0.1, 0.2, -0.3, 0.1, -0.2).finished();

Matrix7d mdot_fd(const WalkerModel& m, const Vector7d& q, const Vector7d& qdot, double h = 1e-6) {
  return (mass_matrix(m, q + h * qdot) - mass_matrix(m, q - h * qdot)) / (2 * h);
}

}  // namespace

TEST_CASE("default model has five 1 kg uniform links") {
  const WalkerModel m;
  for (int k = 0; k < kLinks; ++k) {
    CHECK(m.link_masses[k] == 1.0);
    CHECK(m.com_offsets[k] == doctest::Approx(0.5 * m.link_lengths[k]));
    CHECK(m.link_inertias[k] == doctest::Approx(m.link_lengths[k] * m.link_lengths[k] / 12.0));
  }
  CHECK(m.total_mass() == 5.0);
  CHECK(m.actuation.block<4, 4>(kLeftHip, 0).isIdentity());
  CHECK(m.actuation.topRows<3>().isZero());
}

TEST_CASE("mass matrix") {
  WalkerModel unit;
  unit.link_masses.fill(1.0);
  unit.link_lengths.fill(1.0);
  unit.link_inertias.fill(1.0);
  unit.com_offsets.fill(0.5);
  std::mt19937_64 rng(7);

  SUBCASE("exactly symmetric and positive definite") {
    for (int i = 0; i < 50; ++i) {
      const Matrix7d M = mass_matrix(unit, oracle::random_q(rng));
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<Matrix7d>(M).eigenvalues().minCoeff() > 0.0);
    }
  }
  SUBCASE("translation block carries the total mass") {
    const WalkerModel m;
    for (int i = 0; i < 20; ++i) {
      const Matrix7d M = mass_matrix(m, oracle::random_q(rng));
      CHECK(M(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
      CHECK(M(1, 1) == doctest::Approx(5.0).epsilon(1e-14));
      CHECK(M(0, 1) == doctest::Approx(0.0));
    }
  }
  SUBCASE("matches the Hessian of independently summed kinetic energy") {
    const WalkerModel m;
    CHECK((mass_matrix(m, kRefQ) - oracle::mass_matrix(m, kRefQ)).cwiseAbs().maxCoeff() < 1e-6);
    const Vector7d q = oracle::random_q(rng);
    CHECK((mass_matrix(unit, q) - oracle::mass_matrix(unit, q)).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("kinetic energy is half qdot' M qdot") {
    const WalkerModel m;
    const Vector7d q = oracle::random_q(rng);
    const Vector7d v = oracle::random_qdot(rng);
    CHECK(kinetic_energy(m, q, v) == doctest::Approx(oracle::kinetic_energy(m, q, v)).epsilon(1e-8));
  }
}

TEST_CASE("coriolis matrix") {
  const WalkerModel m;
  std::mt19937_64 rng(11);
  SUBCASE("vanishes at rest") {
    CHECK(coriolis_matrix(m, kRefQ, Vector7d::Zero()).isZero(0.0));
  }
  SUBCASE("Mdot = C + C^T and qdot'(Mdot - 2C)qdot = 0") {
    for (int i = 0; i < 100; ++i) {
      const Vector7d q = oracle::random_q(rng);
      const Vector7d v = oracle::random_qdot(rng);
      const Matrix7d C = coriolis_matrix(m, q, v);
      const Matrix7d Md = mdot_fd(m, q, v);
      CHECK((Md - C - C.transpose()).cwiseAbs().maxCoeff() < 1e-6);
      CHECK(std::abs(v.dot((Md - 2 * C) * v)) < 1e-8);
    }
  }
  SUBCASE("C qdot reproduces the Lagrangian velocity terms") {
    // d/dt(M qdot) - dT/dq at zero acceleration equals C qdot.
    const Vector7d q = oracle::random_q(rng);
    const Vector7d v = oracle::random_qdot(rng);
    const double h = 1e-6;
    Vector7d dTdq;
    for (int i = 0; i < 7; ++i) {
      const Vector7d e = h * Vector7d::Unit(i);
      dTdq[i] = (kinetic_energy(m, q + e, v) - kinetic_energy(m, q - e, v)) / (2 * h);
    }
    const Vector7d lhs = mdot_fd(m, q, v) * v - dTdq;
    CHECK((lhs - coriolis_matrix(m, q, v) * v).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("gravity vector") {
  const WalkerModel m;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vector7d G = gravity_vector(m, oracle::random_q(rng));
    CHECK(G[0] == 0.0);
    CHECK(G[1] == doctest::Approx(5.0 * m.gravity));
  }
  const double h = 1e-6;
  const Vector7d G = gravity_vector(m, kRefQ);
  for (int i = 0; i < 7; ++i) {
    const Vector7d e = h * Vector7d::Unit(i);
    const double fd =
        (oracle::potential_energy(m, kRefQ + e) - oracle::potential_energy(m, kRefQ - e)) / (2 * h);
    CHECK(std::abs(G[i] - fd) < 1e-8);
  }
  CHECK(potential_energy(m, kRefQ) == doctest::Approx(oracle::potential_energy(m, kRefQ)));
}

TEST_CASE("foot kinematics") {
  const WalkerModel m;
  const double h = 0.93;
  Vector7d q = Vector7d::Zero();
  q[kBaseY] = h;
  const double leg = m.link_lengths[kLeftThigh] + m.link_lengths[kLeftShank];
  CHECK(m.leg_length(Side::kLeft) == leg);
  for (Side s : {Side::kLeft, Side::kRight}) {
    CHECK(foot_position(m, q, s).isApprox(Eigen::Vector2d(0.0, h - leg)));
  }

  q << 0.3, 1.0, 0.0, 0.4, -0.7, 0.4, -0.7;
  CHECK(foot_position(m, q, Side::kLeft).isApprox(foot_position(m, q, Side::kRight), 1e-15));

  const auto p = oracle::points(m, kRefQ);
  CHECK((foot_position(m, kRefQ, Side::kLeft) - p.left_foot).norm() < 1e-14);
  CHECK((foot_position(m, kRefQ, Side::kRight) - p.right_foot).norm() < 1e-14);
}

TEST_CASE("foot Jacobians and their time derivatives") {
  const WalkerModel m;
  std::mt19937_64 rng(5);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Vector7d q = oracle::random_q(rng);
    const Vector7d v = oracle::random_qdot(rng);
    for (Side s : {Side::kLeft, Side::kRight}) {
      const Matrix27d A = foot_jacobian(m, q, s);
      CHECK(A.leftCols<2>().isIdentity(0.0));
      auto foot = [&](const Vector7d& x) {
        const auto pts = oracle::points(m, x);
        return s == Side::kLeft ? pts.left_foot : pts.right_foot;
      };
      const Eigen::Vector2d fd = (foot(q + h * v) - foot(q - h * v)) / (2 * h);
      CHECK((A * v - fd).cwiseAbs().maxCoeff() < 1e-6);

      const Matrix27d Ad = foot_jacobian_dot(m, q, v, s);
      const Matrix27d Ad_fd = (foot_jacobian(m, q + h * v, s) - foot_jacobian(m, q - h * v, s)) / (2 * h);
      CHECK((Ad - Ad_fd).cwiseAbs().maxCoeff() < 1e-6);
      CHECK(Ad.leftCols<2>().isZero(0.0));
      CHECK(foot_jacobian_dot(m, q, Vector7d::Zero(), s).isZero(0.0));
    }
    const Matrix27d Ar = foot_jacobian(m, q, Side::kRight);
    CHECK(Ar.col(kLeftHip).isZero(0.0));
    CHECK(Ar.col(kLeftKnee).isZero(0.0));
    const Matrix27d Al = foot_jacobian(m, q, Side::kLeft);
    CHECK(Al.col(kRightHip).isZero(0.0));
    CHECK(Al.col(kRightKnee).isZero(0.0));
  }
}

TEST_CASE("center of mass and its Jacobians") {
  const WalkerModel m;
  std::mt19937_64 rng(9);
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const Vector7d q = oracle::random_q(rng);
    const Vector7d v = oracle::random_qdot(rng);
    const auto p = oracle::points(m, q);
    Eigen::Vector2d com = Eigen::Vector2d::Zero();
    for (int k = 0; k < 5; ++k) com += m.link_masses[k] * p.com[k];
    com /= m.total_mass();
    CHECK((center_of_mass(m, q) - com).norm() < 1e-14);
    const Eigen::Vector2d fd = (center_of_mass(m, q + h * v) - center_of_mass(m, q - h * v)) / (2 * h);
    CHECK((com_jacobian(m, q) * v - fd).cwiseAbs().maxCoeff() < 1e-6);
    const Matrix27d Jd_fd = (com_jacobian(m, q + h * v) - com_jacobian(m, q - h * v)) / (2 * h);
    CHECK((com_jacobian_dot(m, q, v) - Jd_fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("relative foot velocity") {
  const WalkerModel m;
  std::mt19937_64 rng(13);
  const Vector7d q = oracle::random_q(rng);
  CHECK(relative_foot_velocity(m, q, Vector7d::Zero()).isZero(0.0));
  Vector7d v = Vector7d::Zero();
  v[kBaseX] = 0.7;
  v[kBaseY] = -0.4;
  CHECK(relative_foot_velocity(m, q, v).norm() < 1e-15);
}

TEST_CASE("model configuration keys") {
  auto cfg = KeyValueConfig::parse("model.link_masses = 2, 1, 1, 1, 1\nmodel.gravity = 9.8\n");
  const WalkerModel m = WalkerModel::from_config(cfg);
  CHECK(m.link_masses[0] == 2.0);
  CHECK(m.gravity == 9.8);
  CHECK(m.link_inertias[0] == doctest::Approx(2.0 * 0.25 / 12.0));
  CHECK_THROWS_AS(WalkerModel::from_config(KeyValueConfig::parse("model.link_masses = 1, 1\n")),
                  ConfigError);
  CHECK_THROWS(WalkerModel::from_config(KeyValueConfig::parse("model.link_masses = 1,1,1,1,-1\n")));
}
