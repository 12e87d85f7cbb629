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
#include <string>

#include <Eigen/Dense>

namespace contact_est {

enum class ContactMode : int { kLeft = 0, kRight = 1, kDual = 2 };

const char* to_string(ContactMode mode);
/// Accepts "left", "right" or "dual"; throws std::invalid_argument otherwise.
ContactMode parse_contact_mode(const std::string& text);

class SimplexViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sigmoid centers and widths for the transition probabilities plus the
/// belief needed before the reported mode may switch.
struct FusionParams {
  double tau_t = 15.0;         // touchdown threshold (N m)
  double tau_b = 5.0;          // touchdown band (N m)
  double v_t = 0.02;           // liftoff threshold (m/s)
  double v_b = 0.003;          // liftoff band (m/s)
  double switch_belief = 0.5;  // in (0, 1]
  /// Belief mass placed on the declared starting mode; the rest is split evenly.
  double initial_confidence = 0.9;

  void validate() const;
};

/// Probabilities in the order (left, right, dual).
using Belief = Eigen::Vector3d;

struct BeliefState {
  Belief P = Belief(0.05, 0.05, 0.9);
  ContactMode active_mode = ContactMode::kDual;
};

/// Transition probabilities for one tick.
struct TransitionProbabilities {
  double left_to_dual = 0.0;
  double right_to_dual = 0.0;
  double dual_to_left = 0.0;
  double dual_to_right = 0.0;
};

double sigmoid(double x);

/// Probability of leaving single support on side i for dual support, from the
/// torque the side-i observer attributes to external contact.
double touchdown_probability(double tau_norm_i, const FusionParams& params);

/// Probability of leaving dual support for single support on side i. The
/// velocity sigmoid is weighted toward the side whose observer reports the
/// lower external torque. Two zero torque norms split evenly.
double liftoff_probability(double v_rel_norm, double tau_norm_i, double tau_norm_j,
                           const FusionParams& params);

/// Column-stochastic Markov matrix; columns are the current mode, rows the next.
/// If the two dual-exit probabilities sum past one they are scaled back to one.
Eigen::Matrix3d transition_matrix(double pi_left_dual, double pi_right_dual, double pi_dual_left,
                                  double pi_dual_right);

/// Pi * P. Rejects inputs off the simplex by more than 1e-6 and results that
/// drift by more than 1e-9; smaller drift is renormalized away.
Belief update_belief(const Belief& P, const Eigen::Matrix3d& Pi);

/// Switches to the most likely mode only when its belief strictly exceeds
/// switch_belief; otherwise keeps `current`.
ContactMode select_mode(const Belief& P, ContactMode current, const FusionParams& params);

Belief initial_belief(ContactMode start, const FusionParams& params);

/// Inputs to one fusion tick.
struct FusionInput {
  double tau_norm_left = 0.0;
  double tau_norm_right = 0.0;
  double v_rel_norm = 0.0;
  bool left_stale = false;
  bool right_stale = false;
};

/// Sequential Markov filter over one estimation stream.
class ContactFusion {
 public:
  ContactFusion(const FusionParams& params, ContactMode start);

  const BeliefState& step(const FusionInput& input);

  const BeliefState& state() const { return state_; }
  const TransitionProbabilities& last_transitions() const { return last_; }

 private:
  FusionParams params_;
  BeliefState state_;
  TransitionProbabilities last_;
};

}  // namespace contact_est
