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

#include <cstdint>
#include <span>
#include <vector>

#include "contact_est/momentum_observer.hpp"

namespace contact_est {

/// Number of noisy channels per frame: y[5], ydot[5], tau_mot[4].
constexpr int kMeasuredChannels = 14;

/// Channel values of a frame in the order y, ydot, tau_mot.
Eigen::Matrix<double, kMeasuredChannels, 1> channels(const MeasurementFrame& frame);

/// Root-mean-square of each channel over the stream.
Eigen::Matrix<double, kMeasuredChannels, 1> channel_rms(std::span<const MeasurementFrame> frames);

/// Adds zero-mean Gaussian noise to every measured channel. The ratio in
/// snr_db = 10 log10(signal / noise) is a power ratio, so each channel gets a
/// standard deviation of RMS(channel) * 10^(-snr_db / 20). Timestamps are
/// untouched and snr_db = +inf returns the input unchanged.
std::vector<MeasurementFrame> add_noise(std::span<const MeasurementFrame> clean, double snr_db,
                                        std::uint64_t seed);

/// Per-channel empirical SNR in dB of `noisy` against `clean`.
Eigen::Matrix<double, kMeasuredChannels, 1> empirical_snr_db(std::span<const MeasurementFrame> clean,
                                                             std::span<const MeasurementFrame> noisy);

}  // namespace contact_est
