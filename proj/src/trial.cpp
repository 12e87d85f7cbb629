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

#include "contact_est/trial.hpp"

#include <stdexcept>
#include <string>

namespace contact_est {

std::vector<ContactModeLabel> labels_from_ticks(std::span<const double> times,
                                                std::span<const ContactMode> modes, double t_end) {
  if (times.size() != modes.size()) throw std::invalid_argument("times and modes differ in length");
  std::vector<ContactModeLabel> labels;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (labels.empty() || labels.back().mode != modes[k]) {
      if (!labels.empty()) labels.back().t_end = times[k];
      labels.push_back({modes[k], times[k], t_end});
    }
  }
  return labels;
}

std::vector<ContactMode> modes_at(std::span<const ContactModeLabel> labels,
                                  std::span<const double> times) {
  std::vector<ContactMode> out;
  out.reserve(times.size());
  std::size_t idx = 0;
  for (double t : times) {
    while (idx < labels.size() && !(t < labels[idx].t_end)) ++idx;
    if (idx >= labels.size() || t < labels[idx].t_start) {
      // Times need not be sorted; fall back to a scan.
      idx = 0;
      while (idx < labels.size() && !(labels[idx].t_start <= t && t < labels[idx].t_end)) ++idx;
      if (idx >= labels.size()) {
        throw std::out_of_range("no truth label covers t = " + std::to_string(t));
      }
    }
    out.push_back(labels[idx].mode);
  }
  return out;
}

void check_tiling(std::span<const ContactModeLabel> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!(labels[i].t_start < labels[i].t_end)) {
      throw std::invalid_argument("label " + std::to_string(i) + " has an empty interval");
    }
    if (i > 0 && labels[i].t_start != labels[i - 1].t_end) {
      throw std::invalid_argument("labels " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                  " do not meet");
    }
  }
}

}  // namespace contact_est
