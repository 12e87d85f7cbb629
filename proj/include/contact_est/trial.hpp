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

#include <span>
#include <vector>

#include "contact_est/fusion.hpp"

namespace contact_est {

/// Ground-truth contact mode over [t_start, t_end).
struct ContactModeLabel {
  ContactMode mode = ContactMode::kDual;
  double t_start = 0.0;
  double t_end = 0.0;

  bool operator==(const ContactModeLabel&) const = default;
};

/// Collapses a per-tick mode series into labels that tile [times.front(), t_end).
std::vector<ContactModeLabel> labels_from_ticks(std::span<const double> times,
                                                std::span<const ContactMode> modes, double t_end);

/// Mode of the label covering each tick time. Throws std::out_of_range for a
/// time outside every label.
std::vector<ContactMode> modes_at(std::span<const ContactModeLabel> labels,
                                  std::span<const double> times);

/// Throws std::invalid_argument unless the labels tile their span without gaps
/// or overlaps.
void check_tiling(std::span<const ContactModeLabel> labels);

}  // namespace contact_est
