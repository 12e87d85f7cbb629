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

#include "contact_est/log_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace contact_est {

namespace {

constexpr const char* kHeaderPrefix = "# contact_est trial log";
constexpr int kNumericColumns = 1 + 7 + 5 + 5 + 4;

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_real_exact(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

SchemaViolation::SchemaViolation(long line, std::string column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) +
                         (column.empty() ? std::string() : ", column '" + column + "'") + ": " + what),
      line_(line),
      column_(std::move(column)) {}

const std::vector<std::string>& log_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c{"t"};
    for (int i = 0; i < 7; ++i) c.push_back("q" + std::to_string(i));
    for (int i = 0; i < 5; ++i) c.push_back("y" + std::to_string(i));
    for (int i = 0; i < 5; ++i) c.push_back("ydot" + std::to_string(i));
    for (int i = 0; i < 4; ++i) c.push_back("tau" + std::to_string(i));
    c.push_back("truth_mode");
    return c;
  }();
  return columns;
}

TrialLog TrialLog::from_trial(const TrialData& trial) {
  TrialLog log;
  log.frames = trial.frames;
  log.q.reserve(trial.ticks.size());
  for (const auto& tick : trial.ticks) log.q.push_back(tick.q);
  log.truth = trial.truth;
  log.t_end = trial.t_end;
  return log;
}

std::vector<double> TrialLog::times() const {
  std::vector<double> t;
  t.reserve(frames.size());
  for (const auto& f : frames) t.push_back(f.t);
  return t;
}

void write_log(std::ostream& out, const TrialLog& log) {
  if (log.q.size() != log.frames.size()) {
    throw std::invalid_argument("log has " + std::to_string(log.frames.size()) + " frames but " +
                                std::to_string(log.q.size()) + " configurations");
  }
  const auto times = log.times();
  const auto modes = modes_at(log.truth, times);

  out << kHeaderPrefix << ", schema=" << kLogSchemaVersion << ", t_end=" << format_real(log.t_end)
      << "\n";
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";

  std::string row;
  for (std::size_t k = 0; k < log.frames.size(); ++k) {
    const auto& f = log.frames[k];
    row = format_real(f.t);
    auto put = [&row](double v) {
      row += ',';
      row += format_real(v);
    };
    for (int i = 0; i < 7; ++i) put(log.q[k](i));
    for (int i = 0; i < 5; ++i) put(f.y(i));
    for (int i = 0; i < 5; ++i) put(f.ydot(i));
    for (int i = 0; i < 4; ++i) put(f.tau_mot(i));
    row += ',';
    row += to_string(modes[k]);
    out << row << "\n";
  }
}

TrialLog read_log(std::istream& in) {
  TrialLog log;
  std::string line;
  if (!std::getline(in, line)) throw VersionMismatch("empty log: missing header line");
  strip_cr(line);
  if (line.rfind(kHeaderPrefix, 0) != 0) {
    throw VersionMismatch("not a contact_est trial log (header '" + line + "')");
  }
  int version = -1;
  bool have_t_end = false;
  for (auto field : split(std::string_view(line).substr(std::string_view(kHeaderPrefix).size()))) {
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    if (field.rfind("schema=", 0) == 0) {
      const auto v = field.substr(7);
      const auto res = std::from_chars(v.data(), v.data() + v.size(), version);
      if (res.ec != std::errc() || res.ptr != v.data() + v.size()) version = -1;
    } else if (field.rfind("t_end=", 0) == 0) {
      have_t_end = parse_real_exact(field.substr(6), log.t_end);
      if (!have_t_end) throw SchemaViolation(1, "", "unreadable t_end in header");
    }
  }
  if (version != kLogSchemaVersion) {
    throw VersionMismatch("log schema version " + (version < 0 ? std::string("unknown") : std::to_string(version)) +
                          ", expected " + std::to_string(kLogSchemaVersion));
  }
  if (!have_t_end) throw SchemaViolation(1, "", "header lacks t_end");

  const auto& cols = log_columns();
  if (!std::getline(in, line)) throw SchemaViolation(2, cols.front(), "missing column header");
  strip_cr(line);
  const auto names = split(line);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i >= names.size() || names[i] != cols[i]) {
      bool present = false;
      for (auto n : names) present = present || n == cols[i];
      throw SchemaViolation(2, cols[i], present ? "column out of order" : "missing column");
    }
  }
  if (names.size() > cols.size()) {
    throw SchemaViolation(2, std::string(names[cols.size()]), "unexpected extra column");
  }

  std::vector<double> times;
  std::vector<ContactMode> modes;
  long line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() < cols.size()) {
      throw SchemaViolation(line_no, cols[fields.size()], "missing column");
    }
    if (fields.size() > cols.size()) throw SchemaViolation(line_no, "", "too many fields");

    double v[kNumericColumns];
    for (int i = 0; i < kNumericColumns; ++i) {
      if (!parse_real_exact(fields[i], v[i])) {
        throw SchemaViolation(line_no, cols[i], "not a number: '" + std::string(fields[i]) + "'");
      }
    }
    MeasurementFrame f;
    f.t = v[0];
    Vector7d q;
    for (int i = 0; i < 7; ++i) q(i) = v[1 + i];
    for (int i = 0; i < 5; ++i) f.y(i) = v[8 + i];
    for (int i = 0; i < 5; ++i) f.ydot(i) = v[13 + i];
    for (int i = 0; i < 4; ++i) f.tau_mot(i) = v[18 + i];
    try {
      modes.push_back(parse_contact_mode(std::string(fields[kNumericColumns])));
    } catch (const std::invalid_argument& e) {
      throw SchemaViolation(line_no, cols.back(), e.what());
    }
    if (!times.empty() && !(f.t > times.back())) {
      throw SchemaViolation(line_no, "t", "time does not increase");
    }
    times.push_back(f.t);
    log.frames.push_back(f);
    log.q.push_back(q);
  }
  if (!times.empty() && !(log.t_end > times.back())) {
    throw SchemaViolation(1, "", "t_end must lie after the last frame");
  }
  log.truth = labels_from_ticks(times, modes, log.t_end);
  return log;
}

void export_log(const TrialLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_log(out, log);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

TrialLog import_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return read_log(in);
}

}  // namespace contact_est
