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

#include "contact_est/gait_simulator.hpp"

namespace fixtures {

/// The default 5 s gait without noise, simulated once per test binary.
inline const contact_est::TrialData& default_trial() {
  static const contact_est::TrialData trial =
      contact_est::simulate_trial(contact_est::WalkerModel{}, contact_est::GaitConfig{});
  return trial;
}

}  // namespace fixtures
