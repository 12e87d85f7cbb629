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

#include "contact_est/metrics.hpp"

#include <string>

namespace contact_est {

long total(const ConfusionMatrix& c) {
  long n = 0;
  for (const auto& row : c) {
    for (long v : row) n += v;
  }
  return n;
}

long correct(const ConfusionMatrix& c) { return c[0][0] + c[1][1] + c[2][2]; }

double recall(const ConfusionMatrix& c, ContactMode m) {
  const auto& row = c[static_cast<int>(m)];
  const long n = row[0] + row[1] + row[2];
  return n > 0 ? static_cast<double>(row[static_cast<int>(m)]) / n : 0.0;
}

double precision(const ConfusionMatrix& c, ContactMode m) {
  const int j = static_cast<int>(m);
  const long n = c[0][j] + c[1][j] + c[2][j];
  return n > 0 ? static_cast<double>(c[j][j]) / n : 0.0;
}

long count_transitions(std::span<const ContactMode> series) {
  long n = 0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (series[k] != series[k - 1]) ++n;
  }
  return n;
}

TrialResult score_trial(std::span<const ContactMode> modes, std::span<const double> times,
                        std::span<const ContactModeLabel> truth, double warmup) {
  if (modes.size() != times.size()) {
    throw LengthMismatch("mode series has " + std::to_string(modes.size()) + " entries but " +
                         std::to_string(times.size()) + " sample times");
  }
  if (truth.empty()) throw LengthMismatch("no truth labels");
  if (!times.empty() && (times.front() < truth.front().t_start || times.back() >= truth.back().t_end)) {
    throw LengthMismatch("truth labels do not cover the estimated interval");
  }

  TrialResult r;
  r.warmup = warmup;
  r.times.assign(times.begin(), times.end());
  r.mode_series.assign(modes.begin(), modes.end());
  r.truth_series = modes_at(truth, times);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const int i = static_cast<int>(r.truth_series[k]);
    const int j = static_cast<int>(modes[k]);
    ++r.confusion[i][j];
    if (times[k] >= warmup) ++r.confusion_after_warmup[i][j];
  }
  const long n = total(r.confusion);
  const long n_after = total(r.confusion_after_warmup);
  r.accuracy = n > 0 ? static_cast<double>(correct(r.confusion)) / n : 0.0;
  r.accuracy_after_warmup =
      n_after > 0 ? static_cast<double>(correct(r.confusion_after_warmup)) / n_after : 0.0;
  r.true_transitions = count_transitions(r.truth_series);
  r.predicted_transitions = count_transitions(modes);
  return r;
}

}  // namespace contact_est
