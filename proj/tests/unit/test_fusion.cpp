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
#include <random>

#include "contact_est/fusion.hpp"

using namespace contact_est;

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  for (double x : {-40.0, -3.0, -0.1, 0.7, 5.0, 40.0}) {
    CHECK(sigmoid(x) == doctest::Approx(1.0 - sigmoid(-x)).epsilon(1e-15));
  }
  CHECK(std::abs(sigmoid(10.0) - 0.9999546) < 1e-7);
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(sigmoid(800.0) == 1.0);
}

TEST_CASE("touchdown probability") {
  const FusionParams p;
  CHECK(touchdown_probability(p.tau_t, p) == 0.5);
  CHECK(std::abs(touchdown_probability(p.tau_t + 3 * p.tau_b, p) - 0.9526) < 1e-4);
  FusionParams sharp;
  sharp.tau_t = 100.0;
  sharp.tau_b = 1.0;
  CHECK(touchdown_probability(0.0, sharp) < 1e-40);
  double last = 0.0;
  for (double tau = 0.0; tau < 60.0; tau += 0.5) {
    const double now = touchdown_probability(tau, p);
    CHECK(now > last);
    last = now;
  }
}

TEST_CASE("liftoff probability") {
  const FusionParams p;
  CHECK(liftoff_probability(p.v_t, 2.0, 2.0, p) == doctest::Approx(0.25));
  CHECK(liftoff_probability(p.v_t, 0.0, 0.0, p) == doctest::Approx(0.25));
  CHECK(liftoff_probability(p.v_t + 100 * p.v_b, 0.0, 7.0, p) == doctest::Approx(1.0));
  // sigmoid(1) * 3 / (1 + 3)
  CHECK(std::abs(liftoff_probability(p.v_t + p.v_b, 1.0, 3.0, p) - 0.5483) < 1e-4);
  // The two single-support exits share the velocity factor.
  const double a = liftoff_probability(0.05, 1.0, 3.0, p);
  const double b = liftoff_probability(0.05, 3.0, 1.0, p);
  CHECK(a + b == doctest::Approx(sigmoid((0.05 - p.v_t) / p.v_b)));
  CHECK(a > b);
}

TEST_CASE("transition matrix") {
  CHECK(transition_matrix(0, 0, 0, 0).isIdentity(0.0));
  const Eigen::Matrix3d certain = transition_matrix(1, 0, 0, 0);
  CHECK(certain.col(0).isApprox(Eigen::Vector3d(0, 0, 1)));
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Matrix3d Pi = transition_matrix(u(rng), u(rng), u(rng), u(rng));
    CHECK((Pi.array() >= 0.0).all());
    CHECK((Pi.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    // No direct single-to-single transitions.
    CHECK(Pi(0, 1) == 0.0);
    CHECK(Pi(1, 0) == 0.0);
  }
}

TEST_CASE("belief update") {
  const Belief P(0.2, 0.3, 0.5);
  CHECK(update_belief(P, Eigen::Matrix3d::Identity()).isApprox(P, 1e-15));
  CHECK(update_belief(Belief(1, 0, 0), transition_matrix(0.3, 0, 0, 0)).isApprox(Belief(0.7, 0, 0.3)));
  CHECK_THROWS_AS(update_belief(Belief(0.5, 0.5, 0.5), Eigen::Matrix3d::Identity()), SimplexViolation);
  CHECK_THROWS_AS(update_belief(Belief(1.2, -0.2, 0.0), Eigen::Matrix3d::Identity()), SimplexViolation);
  CHECK_THROWS_AS(update_belief(P, 2.0 * Eigen::Matrix3d::Identity()), SimplexViolation);
}

TEST_CASE("belief converges to the stationary distribution of a fixed matrix") {
  const double a = 0.2, b = 0.05, c = 0.1, d = 0.3;
  const Eigen::Matrix3d Pi = transition_matrix(a, b, c, d);
  // Balanced flows into and out of dual support: a P_L = c P_D, b P_R = d P_D.
  Belief expected(c / a, d / b, 1.0);
  expected /= expected.sum();

  Eigen::EigenSolver<Eigen::Matrix3d> es(Pi);
  Eigen::Index k = 0;
  (es.eigenvalues().real().array() - 1.0).abs().minCoeff(&k);
  Belief eig = es.eigenvectors().col(k).real();
  eig /= eig.sum();
  CHECK(eig.isApprox(expected, 1e-12));

  Belief P(0.9, 0.05, 0.05);
  for (int i = 0; i < 2000; ++i) P = update_belief(P, Pi);
  CHECK((P - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("belief stays on the simplex over a million random updates") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Belief P(1.0 / 3, 1.0 / 3, 1.0 / 3);
  double worst = 0.0;
  for (int i = 0; i < 1'000'000; ++i) {
    P = update_belief(P, transition_matrix(u(rng), u(rng), u(rng), u(rng)));
    worst = std::max(worst, std::abs(P.sum() - 1.0));
    if ((P.array() < 0.0).any()) FAIL("negative belief");
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("mode selection with hysteresis") {
  const FusionParams p;
  CHECK(select_mode(Belief(0.6, 0.2, 0.2), ContactMode::kDual, p) == ContactMode::kLeft);
  CHECK(select_mode(Belief(0.4, 0.3, 0.3), ContactMode::kDual, p) == ContactMode::kDual);
  CHECK(select_mode(Belief(1.0 / 3, 1.0 / 3, 1.0 / 3), ContactMode::kRight, p) == ContactMode::kRight);
  CHECK(select_mode(Belief(0.5, 0.0, 0.5), ContactMode::kRight, p) == ContactMode::kRight);
  FusionParams strict = p;
  strict.switch_belief = 0.8;
  CHECK(select_mode(Belief(0.75, 0.05, 0.2), ContactMode::kDual, strict) == ContactMode::kDual);
}

TEST_CASE("sequential fusion") {
  FusionParams p;
  ContactFusion f(p, ContactMode::kDual);
  CHECK(f.state().P.isApprox(Belief(0.05, 0.05, 0.9)));

  SUBCASE("quiet dual support stays dual") {
    // Both observers see large torque and the feet do not move apart.
    for (int i = 0; i < 1000; ++i) f.step({40.0, 40.0, 0.0});
    CHECK(f.state().active_mode == ContactMode::kDual);
    CHECK(f.state().P[2] > 0.99);
  }
  SUBCASE("separating feet with a quiet left observer switch to left support") {
    for (int i = 0; i < 50; ++i) f.step({0.1, 30.0, 0.2});
    CHECK(f.state().active_mode == ContactMode::kLeft);
    SUBCASE("then a torque spike on the left observer returns to dual") {
      for (int i = 0; i < 50; ++i) f.step({40.0, 30.0, 0.0});
      CHECK(f.state().active_mode == ContactMode::kDual);
    }
  }
  SUBCASE("stale inputs reuse the previous probabilities") {
    f.step({0.1, 30.0, 0.2});
    const auto before = f.last_transitions();
    f.step({50.0, 30.0, 0.0, true, false});
    CHECK(f.last_transitions().left_to_dual == before.left_to_dual);
    CHECK(f.last_transitions().dual_to_left == before.dual_to_left);
  }
  SUBCASE("mode changes only when the new mode's belief clears the threshold") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> tau(0.0, 40.0), v(0.0, 0.05);
    ContactMode last = f.state().active_mode;
    for (int i = 0; i < 100000; ++i) {
      const auto& s = f.step({tau(rng), tau(rng), v(rng)});
      if (s.active_mode != last) {
        CHECK(s.P[static_cast<int>(s.active_mode)] > p.switch_belief);
        last = s.active_mode;
      }
    }
  }
}

TEST_CASE("fusion parameters") {
  FusionParams p;
  CHECK_NOTHROW(p.validate());
  p.tau_b = 0.0;
  CHECK_THROWS(p.validate());
  p = FusionParams{};
  p.switch_belief = 1.5;
  CHECK_THROWS(p.validate());
  CHECK(parse_contact_mode("right") == ContactMode::kRight);
  CHECK(std::string(to_string(ContactMode::kDual)) == "dual");
  CHECK_THROWS_AS(parse_contact_mode("flight"), std::invalid_argument);
}
