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

#include "contact_est/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace contact_est {

using nlohmann::json;

namespace {

constexpr ContactMode kModes[] = {ContactMode::kLeft, ContactMode::kRight, ContactMode::kDual};

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// JSON has no infinity; levels and NaN ratios travel as strings.
json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw std::invalid_argument("expected a number, got '" + s + "'");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportIoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw ReportIoError("failed writing '" + path.string() + "'");
}

json confusion_to_json(const ConfusionMatrix& c) {
  json rows = json::array();
  for (const auto& row : c) rows.push_back(row);
  return rows;
}

ConfusionMatrix confusion_from_json(const json& j) {
  ConfusionMatrix c{};
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("confusion must be 3x3");
  for (std::size_t r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) throw std::invalid_argument("confusion must be 3x3");
    for (std::size_t k = 0; k < 3; ++k) c[r][k] = j[r][k].get<long>();
  }
  return c;
}

json per_mode_json(const ConfusionMatrix& c) {
  json out = json::object();
  for (auto m : kModes) {
    out[to_string(m)] = {{"recall", real_to_json(recall(c, m))},
                         {"precision", real_to_json(precision(c, m))}};
  }
  return out;
}

void write_confusion_csv(const TrialResult& r, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "subset,truth,estimate_left,estimate_right,estimate_dual,recall\n";
  auto block = [&out](const char* subset, const ConfusionMatrix& c) {
    for (auto m : kModes) {
      const auto& row = c[static_cast<int>(m)];
      out << subset << ',' << to_string(m) << ',' << row[0] << ',' << row[1] << ',' << row[2] << ','
          << num(recall(c, m)) << "\n";
    }
    out << subset << ",precision";
    for (auto m : kModes) out << ',' << num(precision(c, m));
    out << ",\n";
  };
  block("all", r.confusion);
  block("after_warmup", r.confusion_after_warmup);
  out << "# accuracy=" << num(r.accuracy) << ", accuracy_after_warmup=" << num(r.accuracy_after_warmup)
      << ", warmup=" << num(r.warmup) << ", true_transitions=" << r.true_transitions
      << ", predicted_transitions=" << r.predicted_transitions << "\n";
  finish(out, path);
}

void write_series_csv(const TrialResult& r, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,truth_mode,estimated_mode,belief_left,belief_right,belief_dual,tau_left,tau_right\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out << num(r.times[k]) << ',' << to_string(r.truth_series.at(k)) << ','
        << to_string(r.mode_series.at(k));
    if (k < r.belief_series.size()) {
      for (double b : r.belief_series[k]) out << ',' << num(b);
    } else {
      out << ",,,";
    }
    if (k < r.torque_series.size()) {
      for (double t : r.torque_series[k]) out << ',' << num(t);
    } else {
      out << ",,";
    }
    out << "\n";
  }
  finish(out, path);
}

std::string level_text(double level) { return std::isfinite(level) ? num(level) : (level > 0 ? "inf" : "-inf"); }

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  throw std::invalid_argument("unknown report format '" + text + "' (expected csv or json)");
}

std::filesystem::path sibling_path(const std::filesystem::path& path, const std::string& suffix) {
  return path.parent_path() / (path.stem().string() + suffix);
}

json to_json(const TrialResult& r) {
  json j;
  j["kind"] = "trial";
  j["confusion"] = confusion_to_json(r.confusion);
  j["accuracy"] = r.accuracy;
  j["confusion_after_warmup"] = confusion_to_json(r.confusion_after_warmup);
  j["accuracy_after_warmup"] = r.accuracy_after_warmup;
  j["warmup"] = r.warmup;
  j["per_mode"] = per_mode_json(r.confusion);
  j["per_mode_after_warmup"] = per_mode_json(r.confusion_after_warmup);
  j["true_transitions"] = r.true_transitions;
  j["predicted_transitions"] = r.predicted_transitions;
  j["times"] = r.times;
  json modes = json::array();
  for (auto m : r.mode_series) modes.push_back(to_string(m));
  j["mode_series"] = std::move(modes);
  json truth = json::array();
  for (auto m : r.truth_series) truth.push_back(to_string(m));
  j["truth_series"] = std::move(truth);
  j["belief_series"] = r.belief_series;
  j["torque_series"] = r.torque_series;
  return j;
}

TrialResult trial_result_from_json(const json& j) {
  if (j.value("kind", "") != "trial") throw std::invalid_argument("not a trial report");
  TrialResult r;
  r.confusion = confusion_from_json(j.at("confusion"));
  r.accuracy = j.at("accuracy").get<double>();
  r.confusion_after_warmup = confusion_from_json(j.at("confusion_after_warmup"));
  r.accuracy_after_warmup = j.at("accuracy_after_warmup").get<double>();
  r.warmup = j.at("warmup").get<double>();
  r.true_transitions = j.at("true_transitions").get<long>();
  r.predicted_transitions = j.at("predicted_transitions").get<long>();
  r.times = j.at("times").get<std::vector<double>>();
  for (const auto& m : j.at("mode_series")) r.mode_series.push_back(parse_contact_mode(m.get<std::string>()));
  for (const auto& m : j.at("truth_series")) r.truth_series.push_back(parse_contact_mode(m.get<std::string>()));
  r.belief_series = j.at("belief_series").get<std::vector<std::array<double, 3>>>();
  r.torque_series = j.at("torque_series").get<std::vector<std::array<double, 2>>>();
  if (r.mode_series.size() != r.times.size() || r.truth_series.size() != r.times.size()) {
    throw std::invalid_argument("trial report series lengths differ");
  }
  return r;
}

json to_json(const SweepResult& s) {
  json j;
  j["kind"] = "sweep";
  json levels = json::array();
  for (double l : s.snr_levels_db) levels.push_back(real_to_json(l));
  j["snr_levels_db"] = std::move(levels);
  j["trials_per_level"] = s.trials_per_level;
  j["base_seed"] = s.base_seed;
  j["seeds"] = s.seeds();

  json acc = json::array();
  json means = json::array();
  json trials = json::array();
  for (std::size_t l = 0; l < s.trials.size(); ++l) {
    json row = json::array();
    json trow = json::array();
    for (const auto& t : s.trials[l]) {
      row.push_back(t.accuracy ? json(*t.accuracy) : json(nullptr));
      json tj = {{"seed", t.seed},
                 {"accuracy", t.accuracy ? json(*t.accuracy) : json(nullptr)},
                 {"accuracy_after_warmup", t.accuracy_after_warmup},
                 {"true_transitions", t.true_transitions},
                 {"predicted_transitions", t.predicted_transitions}};
      if (!t.failure.empty()) tj["failure"] = t.failure;
      trow.push_back(std::move(tj));
    }
    acc.push_back(std::move(row));
    trials.push_back(std::move(trow));
    const auto mean = s.mean_accuracy(l);
    means.push_back(mean ? json(*mean) : json(nullptr));
  }
  j["per_level_accuracies"] = std::move(acc);
  j["mean_accuracy"] = std::move(means);
  j["trials"] = std::move(trials);
  return j;
}

SweepResult sweep_result_from_json(const json& j) {
  if (j.value("kind", "") != "sweep") throw std::invalid_argument("not a sweep report");
  SweepResult s;
  for (const auto& l : j.at("snr_levels_db")) s.snr_levels_db.push_back(real_from_json(l));
  s.trials_per_level = j.at("trials_per_level").get<int>();
  s.base_seed = j.at("base_seed").get<std::uint64_t>();
  const auto& trials = j.at("trials");
  if (trials.size() != s.snr_levels_db.size()) throw std::invalid_argument("sweep report level count differs");
  for (const auto& row : trials) {
    if (row.size() != static_cast<std::size_t>(s.trials_per_level)) {
      throw std::invalid_argument("sweep report trial count differs");
    }
    auto& out = s.trials.emplace_back();
    for (const auto& tj : row) {
      SweepTrial t;
      t.seed = tj.at("seed").get<std::uint64_t>();
      if (!tj.at("accuracy").is_null()) t.accuracy = tj.at("accuracy").get<double>();
      t.accuracy_after_warmup = tj.at("accuracy_after_warmup").get<double>();
      t.true_transitions = tj.at("true_transitions").get<long>();
      t.predicted_transitions = tj.at("predicted_transitions").get<long>();
      t.failure = tj.value("failure", "");
      out.push_back(std::move(t));
    }
  }
  return s;
}

void emit_report(const TrialResult& result, ReportFormat format, const std::filesystem::path& path) {
  if (format == ReportFormat::kJson) {
    auto out = open_out(path);
    out << to_json(result).dump(1) << "\n";
    finish(out, path);
    return;
  }
  write_series_csv(result, path);
  write_confusion_csv(result, sibling_path(path, "_confusion.csv"));
}

void emit_report(const SweepResult& result, ReportFormat format, const std::filesystem::path& path) {
  if (format == ReportFormat::kJson) {
    auto out = open_out(path);
    out << to_json(result).dump(1) << "\n";
    finish(out, path);
    return;
  }
  {
    auto out = open_out(path);
    out << "snr_db,trial,seed,accuracy,accuracy_after_warmup,true_transitions,predicted_transitions,failure\n";
    for (std::size_t l = 0; l < result.trials.size(); ++l) {
      for (std::size_t k = 0; k < result.trials[l].size(); ++k) {
        const auto& t = result.trials[l][k];
        std::string failure = t.failure;
        std::replace(failure.begin(), failure.end(), ',', ';');
        std::replace(failure.begin(), failure.end(), '\n', ' ');
        out << level_text(result.snr_levels_db[l]) << ',' << k << ',' << t.seed << ','
            << (t.accuracy ? num(*t.accuracy) : "") << ',' << (t.accuracy ? num(t.accuracy_after_warmup) : "")
            << ',' << t.true_transitions << ',' << (t.accuracy ? std::to_string(t.predicted_transitions) : "")
            << ',' << failure << "\n";
      }
    }
    finish(out, path);
  }
  const auto summary_path = sibling_path(path, "_summary.csv");
  auto out = open_out(summary_path);
  out << "snr_db,completed,missing,mean_accuracy,min_accuracy,max_accuracy,mean_accuracy_after_warmup,"
         "mean_predicted_transitions\n";
  for (std::size_t l = 0; l < result.trials.size(); ++l) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double warm = 0.0;
    double trans = 0.0;
    const auto n = result.completed(l);
    for (const auto& t : result.trials[l]) {
      if (!t.accuracy) continue;
      lo = std::min(lo, *t.accuracy);
      hi = std::max(hi, *t.accuracy);
      warm += t.accuracy_after_warmup;
      trans += static_cast<double>(t.predicted_transitions);
    }
    out << level_text(result.snr_levels_db[l]) << ',' << n << ',' << result.trials[l].size() - n << ',';
    if (n > 0) {
      const double dn = static_cast<double>(n);
      out << num(*result.mean_accuracy(l)) << ',' << num(lo) << ',' << num(hi) << ',' << num(warm / dn) << ','
          << num(trans / dn);
    } else {
      out << ",,,,";
    }
    out << "\n";
  }
  finish(out, summary_path);
}

AnyResult load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReportIoError("cannot open '" + path.string() + "' for reading");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ReportIoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    const std::string kind = j.value("kind", "");
    if (kind == "trial") return trial_result_from_json(j);
    if (kind == "sweep") return sweep_result_from_json(j);
    throw std::invalid_argument("unknown report kind '" + kind + "'");
  } catch (const std::exception& e) {
    throw ReportIoError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace contact_est
