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

#include "contact_est/walker_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "contact_est/config.hpp"

namespace contact_est {

namespace {

// Each link is a planar segment whose absolute angle is a sum of generalized
// coordinates. Points on the walker are the base position plus a sum of
// segment vectors, which keeps every Jacobian and its derivatives closed form.
struct Segment {
  std::array<int, 3> coords;  // angle = sum of q[coords[i]] for coords[i] >= 0
  double direction;           // +1 points up from its joint (torso), -1 down (legs)
};

constexpr std::array<Segment, kLinks> kSegments{{
    {{kBaseAngle, -1, -1}, +1.0},
    {{kBaseAngle, kLeftHip, -1}, -1.0},
    {{kBaseAngle, kLeftHip, kLeftKnee}, -1.0},
    {{kBaseAngle, kRightHip, -1}, -1.0},
    {{kBaseAngle, kRightHip, kRightKnee}, -1.0},
}};

struct Term {
  int segment;
  double length;
};

// A point is base + sum(length * u(segment)); at most two terms here.
struct PointExpr {
  std::array<Term, 2> terms;
  int count;
};

double segment_angle(int s, const Vector7d& q) {
  double a = 0.0;
  for (int c : kSegments[s].coords) {
    if (c >= 0) a += q[c];
  }
  return a;
}

bool segment_uses(int s, int coord) {
  for (int c : kSegments[s].coords) {
    if (c == coord) return true;
  }
  return false;
}

// Unit direction of the segment and its derivative w.r.t. the segment angle.
Eigen::Vector2d unit(int s, double a) {
  return kSegments[s].direction * Eigen::Vector2d(-std::sin(a), std::cos(a));
}

Eigen::Vector2d unit_prime(int s, double a) {
  return kSegments[s].direction * Eigen::Vector2d(-std::cos(a), -std::sin(a));
}

PointExpr com_point(const WalkerModel& m, int link) {
  switch (link) {
    case kTorso:
    case kLeftThigh:
    case kRightThigh:
      return {{{{link, m.com_offsets[link]}, {0, 0.0}}}, 1};
    case kLeftShank:
      return {{{{kLeftThigh, m.link_lengths[kLeftThigh]}, {kLeftShank, m.com_offsets[kLeftShank]}}},
              2};
    default:
      return {{{{kRightThigh, m.link_lengths[kRightThigh]},
                {kRightShank, m.com_offsets[kRightShank]}}},
              2};
  }
}

PointExpr foot_point(const WalkerModel& m, Side side) {
  if (side == Side::kLeft) {
    return {{{{kLeftThigh, m.link_lengths[kLeftThigh]}, {kLeftShank, m.link_lengths[kLeftShank]}}},
            2};
  }
  return {{{{kRightThigh, m.link_lengths[kRightThigh]}, {kRightShank, m.link_lengths[kRightShank]}}},
          2};
}

Eigen::Vector2d point_position(const PointExpr& p, const Vector7d& q) {
  Eigen::Vector2d r(q[kBaseX], q[kBaseY]);
  for (int i = 0; i < p.count; ++i) {
    const auto& t = p.terms[i];
    r += t.length * unit(t.segment, segment_angle(t.segment, q));
  }
  return r;
}

Matrix27d point_jacobian(const PointExpr& p, const Vector7d& q) {
  Matrix27d J = Matrix27d::Zero();
  J(0, kBaseX) = 1.0;
  J(1, kBaseY) = 1.0;
  for (int i = 0; i < p.count; ++i) {
    const auto& t = p.terms[i];
    const Eigen::Vector2d du = t.length * unit_prime(t.segment, segment_angle(t.segment, q));
    for (int c : kSegments[t.segment].coords) {
      if (c >= 0) J.col(c) += du;
    }
  }
  return J;
}

// d(J)/dq_l; the second derivative of u is -u.
Matrix27d point_jacobian_partial(const PointExpr& p, const Vector7d& q, int l) {
  Matrix27d D = Matrix27d::Zero();
  for (int i = 0; i < p.count; ++i) {
    const auto& t = p.terms[i];
    if (!segment_uses(t.segment, l)) continue;
    const Eigen::Vector2d ddu = -t.length * unit(t.segment, segment_angle(t.segment, q));
    for (int c : kSegments[t.segment].coords) {
      if (c >= 0) D.col(c) += ddu;
    }
  }
  return D;
}

Matrix27d point_jacobian_dot(const PointExpr& p, const Vector7d& q, const Vector7d& qdot) {
  Matrix27d D = Matrix27d::Zero();
  for (int i = 0; i < p.count; ++i) {
    const auto& t = p.terms[i];
    const double omega = segment_angle(t.segment, qdot);
    const Eigen::Vector2d ddu = -t.length * omega * unit(t.segment, segment_angle(t.segment, q));
    for (int c : kSegments[t.segment].coords) {
      if (c >= 0) D.col(c) += ddu;
    }
  }
  return D;
}

Vector7d angular_selector(int link) {
  Vector7d w = Vector7d::Zero();
  for (int c : kSegments[link].coords) {
    if (c >= 0) w[c] = 1.0;
  }
  return w;
}

// dM/dq_l for l in the angular coordinates; M does not depend on base position.
Matrix7d mass_matrix_partial(const WalkerModel& model, const Vector7d& q, int l) {
  Matrix7d dM = Matrix7d::Zero();
  for (int k = 0; k < kLinks; ++k) {
    const PointExpr p = com_point(model, k);
    const Matrix27d J = point_jacobian(p, q);
    const Matrix27d D = point_jacobian_partial(p, q, l);
    const Matrix7d JtD = J.transpose() * D;
    dM += model.link_masses[k] * (JtD + JtD.transpose());
  }
  return dM;
}

}  // namespace

const char* to_string(Side s) { return s == Side::kLeft ? "left" : "right"; }

Matrix74d WalkerModel::default_actuation() {
  Matrix74d B = Matrix74d::Zero();
  for (int j = 0; j < kActuated; ++j) B(kLeftHip + j, j) = 1.0;
  return B;
}

WalkerModel WalkerModel::from_config(const KeyValueConfig& config) {
  WalkerModel model;
  auto read_array = [&config](const std::string& key, std::array<double, kLinks>& out) {
    const auto values = config.get_doubles(key, std::vector<double>(out.begin(), out.end()));
    if (values.size() != kLinks) {
      throw ConfigError(key + " needs exactly 5 values (torso, left thigh, left shank, "
                              "right thigh, right shank)");
    }
    std::copy(values.begin(), values.end(), out.begin());
  };
  read_array("model.link_masses", model.link_masses);
  read_array("model.link_lengths", model.link_lengths);
  if (config.contains("model.com_offsets")) {
    read_array("model.com_offsets", model.com_offsets);
  } else {
    for (int k = 0; k < kLinks; ++k) model.com_offsets[k] = 0.5 * model.link_lengths[k];
  }
  if (config.contains("model.link_inertias")) {
    read_array("model.link_inertias", model.link_inertias);
  } else {
    for (int k = 0; k < kLinks; ++k) {
      model.link_inertias[k] = model.link_masses[k] * model.link_lengths[k] * model.link_lengths[k] / 12.0;
    }
  }
  model.gravity = config.get_double("model.gravity", model.gravity);
  model.validate();
  return model;
}

void WalkerModel::validate() const {
  for (int k = 0; k < kLinks; ++k) {
    if (!(link_masses[k] > 0.0) || !(link_lengths[k] > 0.0) || !(link_inertias[k] > 0.0)) {
      throw std::invalid_argument("link " + std::to_string(k) +
                                  ": mass, length and inertia must be strictly positive");
    }
    if (!std::isfinite(com_offsets[k])) {
      throw std::invalid_argument("link " + std::to_string(k) + ": COM offset must be finite");
    }
  }
  if (!std::isfinite(gravity)) throw std::invalid_argument("gravity must be finite");
  if (!actuation.topRows(3).isZero(0.0)) {
    throw std::invalid_argument("actuation selector must not drive the floating-base coordinates");
  }
  for (int j = 0; j < kActuated; ++j) {
    int ones = 0;
    for (int i = 0; i < kDof; ++i) {
      const double b = actuation(i, j);
      if (b == 1.0) {
        ++ones;
      } else if (b != 0.0) {
        throw std::invalid_argument("actuation selector must be binary");
      }
    }
    if (ones != 1) throw std::invalid_argument("each actuated joint needs exactly one unit entry");
  }
}

double WalkerModel::total_mass() const {
  double m = 0.0;
  for (double mk : link_masses) m += mk;
  return m;
}

double WalkerModel::leg_length(Side side) const {
  return side == Side::kLeft ? link_lengths[kLeftThigh] + link_lengths[kLeftShank]
                             : link_lengths[kRightThigh] + link_lengths[kRightShank];
}

Matrix7d mass_matrix(const WalkerModel& model, const Vector7d& q) {
  Matrix7d M = Matrix7d::Zero();
  for (int k = 0; k < kLinks; ++k) {
    const Matrix27d J = point_jacobian(com_point(model, k), q);
    const Vector7d w = angular_selector(k);
    M.noalias() += model.link_masses[k] * J.transpose() * J;
    M.noalias() += model.link_inertias[k] * w * w.transpose();
  }
  // Exact symmetry; the two products above are symmetric only up to rounding.
  return 0.5 * (M + M.transpose());
}

Matrix7d coriolis_matrix(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot) {
  // C_ij = 1/2 sum_l (dM_ij/dq_l + dM_il/dq_j - dM_jl/dq_i) qdot_l
  //      = 1/2 (Mdot + X - X^T) with X.col(j) = dM/dq_j * qdot.
  Matrix7d Mdot = Matrix7d::Zero();
  Matrix7d X = Matrix7d::Zero();
  for (int l = kBaseAngle; l < kDof; ++l) {
    const Matrix7d dM = mass_matrix_partial(model, q, l);
    Mdot += dM * qdot[l];
    X.col(l) = dM * qdot;
  }
  return 0.5 * (Mdot + X - X.transpose());
}

Vector7d gravity_vector(const WalkerModel& model, const Vector7d& q) {
  Vector7d G = Vector7d::Zero();
  for (int k = 0; k < kLinks; ++k) {
    const Matrix27d J = point_jacobian(com_point(model, k), q);
    G += model.link_masses[k] * model.gravity * J.row(1).transpose();
  }
  return G;
}

DynamicsTerms dynamics_terms(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot) {
  return {mass_matrix(model, q), coriolis_matrix(model, q, qdot), gravity_vector(model, q)};
}

double kinetic_energy(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot) {
  return 0.5 * qdot.dot(mass_matrix(model, q) * qdot);
}

double potential_energy(const WalkerModel& model, const Vector7d& q) {
  double v = 0.0;
  for (int k = 0; k < kLinks; ++k) {
    v += model.link_masses[k] * model.gravity * point_position(com_point(model, k), q).y();
  }
  return v;
}

Eigen::Vector2d foot_position(const WalkerModel& model, const Vector7d& q, Side side) {
  return point_position(foot_point(model, side), q);
}

Matrix27d foot_jacobian(const WalkerModel& model, const Vector7d& q, Side side) {
  return point_jacobian(foot_point(model, side), q);
}

Matrix27d foot_jacobian_dot(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot,
                            Side side) {
  return point_jacobian_dot(foot_point(model, side), q, qdot);
}

ContactJacobians contact_jacobians(const WalkerModel& model, const Vector7d& q,
                                   const Vector7d& qdot) {
  return {foot_jacobian(model, q, Side::kLeft), foot_jacobian(model, q, Side::kRight),
          foot_jacobian_dot(model, q, qdot, Side::kLeft),
          foot_jacobian_dot(model, q, qdot, Side::kRight)};
}

Eigen::Vector2d center_of_mass(const WalkerModel& model, const Vector7d& q) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (int k = 0; k < kLinks; ++k) c += model.link_masses[k] * point_position(com_point(model, k), q);
  return c / model.total_mass();
}

Matrix27d com_jacobian(const WalkerModel& model, const Vector7d& q) {
  Matrix27d J = Matrix27d::Zero();
  for (int k = 0; k < kLinks; ++k) J += model.link_masses[k] * point_jacobian(com_point(model, k), q);
  return J / model.total_mass();
}

Matrix27d com_jacobian_dot(const WalkerModel& model, const Vector7d& q, const Vector7d& qdot) {
  Matrix27d D = Matrix27d::Zero();
  for (int k = 0; k < kLinks; ++k) {
    D += model.link_masses[k] * point_jacobian_dot(com_point(model, k), q, qdot);
  }
  return D / model.total_mass();
}

Eigen::Vector2d relative_foot_velocity(const WalkerModel& model, const Vector7d& q,
                                       const Vector7d& qdot) {
  return (foot_jacobian(model, q, Side::kLeft) - foot_jacobian(model, q, Side::kRight)) * qdot;
}

}  // namespace contact_est
