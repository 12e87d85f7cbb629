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

#include "contact_est/measurement_noise.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace contact_est {

namespace {

using ChannelVector = Eigen::Matrix<double, kMeasuredChannels, 1>;

void assign_channels(MeasurementFrame& frame, const ChannelVector& c) {
  frame.y = c.segment<kReducedDof>(0);
  frame.ydot = c.segment<kReducedDof>(kReducedDof);
  frame.tau_mot = c.segment<kActuated>(2 * kReducedDof);
}

}  // namespace

ChannelVector channels(const MeasurementFrame& frame) {
  ChannelVector c;
  c << frame.y, frame.ydot, frame.tau_mot;
  return c;
}

ChannelVector channel_rms(std::span<const MeasurementFrame> frames) {
  ChannelVector sum = ChannelVector::Zero();
  for (const auto& f : frames) sum += channels(f).cwiseAbs2();
  if (frames.empty()) return sum;
  return (sum / static_cast<double>(frames.size())).cwiseSqrt();
}

std::vector<MeasurementFrame> add_noise(std::span<const MeasurementFrame> clean, double snr_db,
                                        std::uint64_t seed) {
  if (clean.empty()) throw std::invalid_argument("cannot add noise to an empty stream");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("snr_db must be finite or +inf");
  }
  std::vector<MeasurementFrame> out(clean.begin(), clean.end());
  if (snr_db == std::numeric_limits<double>::infinity()) return out;

  const ChannelVector sigma = channel_rms(clean) * std::pow(10.0, -snr_db / 20.0);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& frame : out) {
    ChannelVector c = channels(frame);
    for (int i = 0; i < kMeasuredChannels; ++i) c[i] += sigma[i] * normal(rng);
    assign_channels(frame, c);
  }
  return out;
}

ChannelVector empirical_snr_db(std::span<const MeasurementFrame> clean,
                               std::span<const MeasurementFrame> noisy) {
  if (clean.size() != noisy.size()) throw std::invalid_argument("streams differ in length");
  ChannelVector signal = ChannelVector::Zero();
  ChannelVector noise = ChannelVector::Zero();
  for (std::size_t k = 0; k < clean.size(); ++k) {
    const ChannelVector c = channels(clean[k]);
    signal += c.cwiseAbs2();
    noise += (channels(noisy[k]) - c).cwiseAbs2();
  }
  ChannelVector snr;
  for (int i = 0; i < kMeasuredChannels; ++i) snr[i] = 10.0 * std::log10(signal[i] / noise[i]);
  return snr;
}

}  // namespace contact_est
