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

#include "contact_est/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace contact_est {

const char* to_string(ContactMode mode) {
  switch (mode) {
    case ContactMode::kLeft:
      return "left";
    case ContactMode::kRight:
      return "right";
    case ContactMode::kDual:
      return "dual";
  }
  return "?";
}

ContactMode parse_contact_mode(const std::string& text) {
  if (text == "left") return ContactMode::kLeft;
  if (text == "right") return ContactMode::kRight;
  if (text == "dual") return ContactMode::kDual;
  throw std::invalid_argument("unknown contact mode '" + text + "'");
}

void FusionParams::validate() const {
  if (!(tau_b > 0.0) || !(v_b > 0.0)) throw std::invalid_argument("sigmoid bands must be positive");
  if (!(tau_t >= 0.0) || !(v_t >= 0.0)) {
    throw std::invalid_argument("sigmoid thresholds must be non-negative");
  }
  if (!(switch_belief > 0.0 && switch_belief <= 1.0)) {
    throw std::invalid_argument("switch_belief must lie in (0, 1]");
  }
  if (!(initial_confidence >= 0.0 && initial_confidence <= 1.0)) {
    throw std::invalid_argument("initial_confidence must lie in [0, 1]");
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double touchdown_probability(double tau_norm_i, const FusionParams& params) {
  return sigmoid((tau_norm_i - params.tau_t) / params.tau_b);
}

double liftoff_probability(double v_rel_norm, double tau_norm_i, double tau_norm_j,
                           const FusionParams& params) {
  const double total = tau_norm_i + tau_norm_j;
  const double ratio = total > 0.0 ? tau_norm_j / total : 0.5;
  return sigmoid((v_rel_norm - params.v_t) / params.v_b) * ratio;
}

Eigen::Matrix3d transition_matrix(double pi_left_dual, double pi_right_dual, double pi_dual_left,
                                  double pi_dual_right) {
  auto clamp01 = [](double p) { return std::clamp(p, 0.0, 1.0); };
  pi_left_dual = clamp01(pi_left_dual);
  pi_right_dual = clamp01(pi_right_dual);
  pi_dual_left = clamp01(pi_dual_left);
  pi_dual_right = clamp01(pi_dual_right);
  double dual_stay = 1.0 - pi_dual_left - pi_dual_right;
  if (dual_stay < 0.0) {
    pi_dual_left /= pi_dual_left + pi_dual_right;
    pi_dual_right = 1.0 - pi_dual_left;
    dual_stay = 0.0;
  }

  Eigen::Matrix3d Pi;
  // clang-format off
  Pi << 1.0 - pi_left_dual, 0.0,                 pi_dual_left,
        0.0,                1.0 - pi_right_dual, pi_dual_right,
        pi_left_dual,       pi_right_dual,       dual_stay;
  // clang-format on
  return Pi;
}

Belief update_belief(const Belief& P, const Eigen::Matrix3d& Pi) {
  constexpr double kInputTolerance = 1e-6;
  constexpr double kDriftTolerance = 1e-9;
  if ((P.array() < -kInputTolerance).any() || std::abs(P.sum() - 1.0) > kInputTolerance ||
      !P.allFinite()) {
    throw SimplexViolation("belief is not on the probability simplex");
  }
  Belief next = Pi * P;
  if ((next.array() < -kDriftTolerance).any() || std::abs(next.sum() - 1.0) > kDriftTolerance) {
    throw SimplexViolation("transition matrix moved the belief off the simplex");
  }
  next = next.cwiseMax(0.0);
  return next / next.sum();
}

ContactMode select_mode(const Belief& P, ContactMode current, const FusionParams& params) {
  Eigen::Index best = 0;
  P.maxCoeff(&best);
  if (P[best] > params.switch_belief) return static_cast<ContactMode>(best);
  return current;
}

Belief initial_belief(ContactMode start, const FusionParams& params) {
  const double rest = 0.5 * (1.0 - params.initial_confidence);
  Belief P = Belief::Constant(rest);
  P[static_cast<int>(start)] = params.initial_confidence;
  return P;
}

ContactFusion::ContactFusion(const FusionParams& params, ContactMode start) : params_(params) {
  params_.validate();
  state_.P = initial_belief(start, params_);
  state_.active_mode = start;
}

const BeliefState& ContactFusion::step(const FusionInput& in) {
  TransitionProbabilities pi;
  pi.left_to_dual = touchdown_probability(in.tau_norm_left, params_);
  pi.right_to_dual = touchdown_probability(in.tau_norm_right, params_);
  pi.dual_to_left = liftoff_probability(in.v_rel_norm, in.tau_norm_left, in.tau_norm_right, params_);
  pi.dual_to_right =
      liftoff_probability(in.v_rel_norm, in.tau_norm_right, in.tau_norm_left, params_);
  if (in.left_stale) {
    pi.left_to_dual = last_.left_to_dual;
    pi.dual_to_left = last_.dual_to_left;
  }
  if (in.right_stale) {
    pi.right_to_dual = last_.right_to_dual;
    pi.dual_to_right = last_.dual_to_right;
  }
  last_ = pi;

  const Eigen::Matrix3d Pi =
      transition_matrix(pi.left_to_dual, pi.right_to_dual, pi.dual_to_left, pi.dual_to_right);
  state_.P = update_belief(state_.P, Pi);
  state_.active_mode = select_mode(state_.P, state_.active_mode, params_);
  return state_;
}

}  // namespace contact_est
