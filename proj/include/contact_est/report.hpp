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
#include <string>
#include <variant>

#include <json.hpp>

#include "contact_est/harness.hpp"
#include "contact_est/metrics.hpp"

namespace contact_est {

enum class ReportFormat { kCsv, kJson };

/// Accepts "csv" or "json".
ReportFormat parse_report_format(const std::string& text);

/// I/O failure while writing or reading a report; the message names the path.
class ReportIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV writes the per-tick series to `path` and the confusion matrix with
/// per-mode recall and precision to `<stem>_confusion.csv` next to it.
/// JSON writes one document holding everything.
void emit_report(const TrialResult& result, ReportFormat format, const std::filesystem::path& path);

/// CSV writes one row per trial to `path` and the accuracy-vs-SNR table to
/// `<stem>_summary.csv`. JSON writes one document.
void emit_report(const SweepResult& result, ReportFormat format, const std::filesystem::path& path);

nlohmann::json to_json(const TrialResult& result);
nlohmann::json to_json(const SweepResult& result);
TrialResult trial_result_from_json(const nlohmann::json& j);
SweepResult sweep_result_from_json(const nlohmann::json& j);

using AnyResult = std::variant<TrialResult, SweepResult>;

/// Reads a JSON report written by emit_report.
AnyResult load_report(const std::filesystem::path& path);

/// `<dir>/<stem><suffix>` for a report path.
std::filesystem::path sibling_path(const std::filesystem::path& path, const std::string& suffix);

}  // namespace contact_est
