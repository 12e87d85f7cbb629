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

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "contact_est/gait_simulator.hpp"

namespace contact_est {

/// Schema version written to and required from the log header.
constexpr int kLogSchemaVersion = 1;

/// A malformed log row or column header.
class SchemaViolation : public std::runtime_error {
 public:
  SchemaViolation(long line, std::string column, const std::string& what);
  long line() const { return line_; }
  /// Column involved, empty when the problem is not tied to one.
  const std::string& column() const { return column_; }

 private:
  long line_;
  std::string column_;
};

/// The first line is not a log header of a supported schema version.
class VersionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One replayable trial: measured frames, the true configuration at each
/// frame and the labeled contact modes.
struct TrialLog {
  std::vector<MeasurementFrame> frames;
  std::vector<Vector7d> q;
  std::vector<ContactModeLabel> truth;
  double t_end = 0.0;

  static TrialLog from_trial(const TrialData& trial);
  std::vector<double> times() const;
};

/// Column names in file order.
const std::vector<std::string>& log_columns();

void write_log(std::ostream& out, const TrialLog& log);
TrialLog read_log(std::istream& in);

/// Numbers are written in shortest round-trip form, so import_log returns
/// bit-identical values.
void export_log(const TrialLog& log, const std::filesystem::path& path);
TrialLog import_log(const std::filesystem::path& path);

}  // namespace contact_est
