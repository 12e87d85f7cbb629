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

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "contact_est/config.hpp"
#include "contact_est/harness.hpp"
#include "contact_est/log_io.hpp"
#include "contact_est/report.hpp"
#include "fixtures.hpp"

using namespace contact_est;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "contact_est_unit";
  fs::create_directories(dir);
  return dir;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

template <typename V>
bool same_bits(const V& a, const V& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

const char* kHeader =
    "# contact_est trial log, schema=1, t_end=0.003\n"
    "t,q0,q1,q2,q3,q4,q5,q6,y0,y1,y2,y3,y4,ydot0,ydot1,ydot2,ydot3,ydot4,tau0,tau1,tau2,tau3,truth_mode\n";

}  // namespace

TEST_CASE("log round trip of a simulated trial is bit-exact") {
  const TrialData base = simulate_trial(WalkerModel{}, GaitConfig{}, 70.0, 3);
  const TrialLog log = TrialLog::from_trial(base);
  REQUIRE(log.frames.size() == 5000);
  const fs::path path = scratch_dir() / "roundtrip.csv";
  export_log(log, path);
  const TrialLog back = import_log(path);
  REQUIRE(back.frames.size() == log.frames.size());
  bool exact = true;
  for (std::size_t k = 0; k < log.frames.size(); ++k) {
    exact = exact && same_bits(log.frames[k].t, back.frames[k].t) && same_bits(log.frames[k].y, back.frames[k].y) &&
            same_bits(log.frames[k].ydot, back.frames[k].ydot) &&
            same_bits(log.frames[k].tau_mot, back.frames[k].tau_mot) && same_bits(log.q[k], back.q[k]);
  }
  CHECK(exact);
  CHECK(back.truth == log.truth);
  CHECK(same_bits(back.t_end, log.t_end));

  // Writing the imported log again reproduces the file byte for byte.
  std::ostringstream a, b;
  write_log(a, log);
  write_log(b, back);
  CHECK(a.str() == b.str());
}

TEST_CASE("hand-written three-row log") {
  std::istringstream in(std::string(kHeader) +
                        "0,0,0.9,0,0.1,-0.2,0.3,-0.4,0,0.1,-0.2,0.3,-0.4,0,0,0,0,0,1,2,3,4,dual\n"
                        "0.001,0.5,0.9,0.01,0.1,-0.2,0.3,-0.4,0.01,0.1,-0.2,0.3,-0.4,1e-3,0,0,0,-2.5,1,2,3,4,left\n"
                        "0.002,0.5,0.9,0.01,0.1,-0.2,0.3,-0.4,0.01,0.1,-0.2,0.3,-0.4,1e-3,0,0,0,-2.5,1,2,3,4.25,left\n");
  const TrialLog log = read_log(in);
  REQUIRE(log.frames.size() == 3);
  CHECK(log.frames[1].t == 0.001);
  CHECK(log.q[1][0] == 0.5);
  CHECK(log.frames[1].y[0] == 0.01);
  CHECK(log.frames[1].ydot[0] == 0.001);
  CHECK(log.frames[1].ydot[4] == -2.5);
  CHECK(log.frames[2].tau_mot[3] == 4.25);
  CHECK(log.t_end == 0.003);
  REQUIRE(log.truth.size() == 2);
  CHECK(log.truth[0].mode == ContactMode::kDual);
  CHECK(log.truth[1].mode == ContactMode::kLeft);
  CHECK(log.truth[1].t_start == 0.001);
  CHECK(log.truth[1].t_end == 0.003);
}

TEST_CASE("malformed logs") {
  SUBCASE("missing column in the header names the column") {
    std::istringstream in(
        "# contact_est trial log, schema=1, t_end=1\n"
        "t,q0,q1,q2,q3,q4,q5,q6,y0,y1,y2,y3,y4,ydot0,ydot1,ydot2,ydot3,ydot4,tau0,tau1,tau2,truth_mode\n");
    try {
      read_log(in);
      FAIL("expected SchemaViolation");
    } catch (const SchemaViolation& e) {
      CHECK(e.column() == "tau3");
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("tau3") != std::string::npos);
    }
  }
  SUBCASE("short row names the first missing column") {
    std::istringstream in(std::string(kHeader) + "0,0,0.9,0,0.1,-0.2,0.3,-0.4,0,0.1\n");
    try {
      read_log(in);
      FAIL("expected SchemaViolation");
    } catch (const SchemaViolation& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == "y2");
    }
  }
  SUBCASE("bad number") {
    std::istringstream in(std::string(kHeader) +
                          "0,0,0.9,0,0.1,-0.2,0.3,-0.4,0,0.1,-0.2,0.3,-0.4,0,0,x,0,0,1,2,3,4,dual\n");
    CHECK_THROWS_AS(read_log(in), SchemaViolation);
  }
  SUBCASE("unknown mode") {
    std::istringstream in(std::string(kHeader) +
                          "0,0,0.9,0,0.1,-0.2,0.3,-0.4,0,0.1,-0.2,0.3,-0.4,0,0,0,0,0,1,2,3,4,hop\n");
    CHECK_THROWS_AS(read_log(in), SchemaViolation);
  }
  SUBCASE("wrong schema version") {
    std::istringstream in("# contact_est trial log, schema=2, t_end=1\n");
    CHECK_THROWS_AS(read_log(in), VersionMismatch);
  }
  SUBCASE("not a log") {
    std::istringstream in("t,q0\n");
    CHECK_THROWS_AS(read_log(in), VersionMismatch);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_log(empty), VersionMismatch);
  }
  SUBCASE("unreadable path") {
    CHECK_THROWS_WITH_AS(import_log("/nonexistent/dir/log.csv"), doctest::Contains("/nonexistent/dir/log.csv"),
                         std::runtime_error);
  }
}

TEST_CASE("key-value configuration") {
  const auto c = KeyValueConfig::parse(
      "# comment\n"
      "fusion.tau_t = 12\n"
      "  sweep.levels_db = 40, 60, inf  \n"
      "fusion.tau_t = 14\n"
      "estimator.initial_mode = left\n");
  CHECK(c.get_double("fusion.tau_t", 0.0) == 14.0);
  CHECK(c.get_double("fusion.tau_b", 5.5) == 5.5);
  const auto levels = c.get_doubles("sweep.levels_db", {});
  REQUIRE(levels.size() == 3);
  CHECK(std::isinf(levels[2]));
  CHECK(KeyValueConfig::parse(c.to_string()).entries() == c.entries());
  CHECK_THROWS_AS(KeyValueConfig::parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(c.get_double("estimator.initial_mode", 0.0), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent.conf"), ConfigError);
}

TEST_CASE("harness configuration") {
  SUBCASE("defaults") {
    const HarnessConfig h = HarnessConfig::from_config(KeyValueConfig{});
    CHECK(h.estimator.gain.diagonal == Vector5d::Constant(50.0));
    CHECK(h.estimator.fusion.tau_t == 15.0);
    CHECK(h.estimator.fusion.switch_belief == 0.5);
    CHECK(h.gait.rate == 1000.0);
    CHECK(std::isinf(h.snr_db));
    CHECK(h.warmup == 0.1);
  }
  SUBCASE("every section is read") {
    const auto c = KeyValueConfig::parse(
        "model.gravity = 9.8\n"
        "gait.step_length = 0.28\n"
        "observer.gain = 40, 50, 60, 70, 80\n"
        "fusion.v_t = 0.03\n"
        "estimator.initial_mode = right\n"
        "noise.snr_db = 70\n"
        "seed = 9\n"
        "metrics.warmup = 0.2\n"
        "sweep.levels_db = 50, 90\n"
        "sweep.trials = 4\n"
        "sweep.base_seed = 77\n"
        "sweep.threads = 2\n");
    const HarnessConfig h = HarnessConfig::from_config(c);
    CHECK(h.model.gravity == 9.8);
    CHECK(h.gait.step_length == 0.28);
    CHECK(h.estimator.gain.diagonal[4] == 80.0);
    CHECK(h.estimator.fusion.v_t == 0.03);
    CHECK(h.estimator.initial_mode == ContactMode::kRight);
    CHECK(h.snr_db == 70.0);
    CHECK(h.seed == 9);
    CHECK(h.warmup == 0.2);
    CHECK(h.sweep.levels_db == std::vector<double>{50.0, 90.0});
    CHECK(h.sweep.trials == 4);
    CHECK(h.sweep.base_seed == 77);
    CHECK(h.sweep.threads == 2);
  }
  SUBCASE("scalar gain") {
    const auto h = HarnessConfig::from_config(KeyValueConfig::parse("observer.gain = 80\n"));
    CHECK(h.estimator.gain.diagonal == Vector5d::Constant(80.0));
  }
  SUBCASE("bad input") {
    CHECK_THROWS_WITH_AS(HarnessConfig::from_config(KeyValueConfig::parse("fusion.tauu_t = 1\n")),
                         doctest::Contains("fusion.tauu_t"), ConfigError);
    CHECK_THROWS_AS(HarnessConfig::from_config(KeyValueConfig::parse("observer.gain = 1, 2\n")), ConfigError);
    CHECK_THROWS_AS(HarnessConfig::from_config(KeyValueConfig::parse("sweep.trials = 0\n")), ConfigError);
    CHECK_THROWS_AS(HarnessConfig::from_config(KeyValueConfig::parse("fusion.switch_belief = 0\n")),
                    ConfigError);
    CHECK_THROWS_AS(HarnessConfig::from_config(KeyValueConfig::parse("estimator.initial_mode = up\n")),
                    ConfigError);
    CHECK_THROWS_AS(HarnessConfig::from_config(KeyValueConfig::parse("seed = -1\n")), ConfigError);
  }
}

TEST_CASE("sweep") {
  HarnessConfig h;
  h.gait.duration = 2.0;
  h.sweep.levels_db = {40.0, 90.0};
  h.sweep.trials = 3;
  h.sweep.base_seed = 5;

  h.sweep.threads = 1;
  const SweepResult one = snr_sweep(h);
  h.sweep.threads = 4;
  const SweepResult four = snr_sweep(h);

  REQUIRE(one.trials.size() == 2);
  REQUIRE(one.trials[0].size() == 3);
  CHECK(one.seeds().size() == 6);
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(one.trials[l][k].seed == trial_seed(5, l, k));
      REQUIRE(one.trials[l][k].accuracy.has_value());
      CHECK(same_bits(*one.trials[l][k].accuracy, *four.trials[l][k].accuracy));
      CHECK(one.trials[l][k].predicted_transitions == four.trials[l][k].predicted_transitions);
    }
  }
  CHECK(*one.mean_accuracy(1) >= *one.mean_accuracy(0));

  // Any trial can be reproduced from its recorded seed alone.
  const TrialData clean = simulate_trial(h.model, h.gait);
  const TrialResult again = run_noisy_trial(clean, h, 40.0, one.trials[0][2].seed);
  CHECK(same_bits(again.accuracy, *one.trials[0][2].accuracy));

  // Seeds differ across levels and trials.
  auto seeds = one.seeds();
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("a diverging gait is recorded as missing, not fatal") {
  HarnessConfig h;
  h.gait.duration = 2.0;
  h.gait.step_length = 0.9;  // far beyond what the walker can reach
  h.sweep.levels_db = {70.0};
  h.sweep.trials = 2;
  const SweepResult r = snr_sweep(h);
  CHECK(r.completed(0) == 0);
  CHECK(!r.mean_accuracy(0).has_value());
  CHECK(!r.trials[0][0].failure.empty());
}

TEST_CASE("reports") {
  const TrialData& t = fixtures::default_trial();
  HarnessConfig h;
  const TrialResult r = run_noisy_trial(t, h, 70.0, 1);
  const fs::path dir = scratch_dir();

  SUBCASE("trial JSON round trip") {
    emit_report(r, ReportFormat::kJson, dir / "trial.json");
    const auto loaded = load_report(dir / "trial.json");
    REQUIRE(std::holds_alternative<TrialResult>(loaded));
    const auto& back = std::get<TrialResult>(loaded);
    CHECK(back.confusion == r.confusion);
    CHECK(back.accuracy == r.accuracy);
    CHECK(back.mode_series == r.mode_series);
    CHECK(back.belief_series == r.belief_series);
    CHECK(back.torque_series == r.torque_series);
    CHECK(back.times == r.times);
  }
  SUBCASE("trial CSV") {
    emit_report(r, ReportFormat::kCsv, dir / "trial.csv");
    std::ifstream series(dir / "trial.csv");
    std::string line;
    long rows = -1;
    while (std::getline(series, line)) ++rows;
    CHECK(rows == 5000);
    std::ifstream confusion(dir / "trial_confusion.csv");
    REQUIRE(confusion.good());
    std::getline(confusion, line);
    CHECK(line.rfind("subset,truth", 0) == 0);
    // Row "all,dual,..." carries the dual row of the matrix and its recall.
    for (int i = 0; i < 3; ++i) std::getline(confusion, line);
    std::ostringstream expected;
    expected << "all,dual," << r.confusion[2][0] << ',' << r.confusion[2][1] << ',' << r.confusion[2][2] << ',';
    CHECK(line.rfind(expected.str(), 0) == 0);
  }
  SUBCASE("sweep JSON and CSV") {
    HarnessConfig sh;
    sh.gait.duration = 1.0;
    sh.sweep.levels_db = {50.0, std::numeric_limits<double>::infinity()};
    sh.sweep.trials = 2;
    const SweepResult s = snr_sweep(sh);
    emit_report(s, ReportFormat::kJson, dir / "sweep.json");
    const auto back = std::get<SweepResult>(load_report(dir / "sweep.json"));
    CHECK(back.snr_levels_db.size() == 2);
    CHECK(std::isinf(back.snr_levels_db[1]));
    CHECK(back.seeds() == s.seeds());
    CHECK(back.per_level_accuracies() == s.per_level_accuracies());
    emit_report(s, ReportFormat::kCsv, dir / "sweep.csv");
    std::ifstream summary(dir / "sweep_summary.csv");
    std::string line;
    long rows = 0;
    while (std::getline(summary, line)) ++rows;
    CHECK(rows == 3);
  }
  SUBCASE("errors name the path") {
    CHECK_THROWS_WITH_AS(emit_report(r, ReportFormat::kJson, "/nonexistent/dir/r.json"),
                         doctest::Contains("/nonexistent/dir/r.json"), ReportIoError);
    CHECK_THROWS_WITH_AS(load_report("/nonexistent/x.json"), doctest::Contains("/nonexistent/x.json"), ReportIoError);
    CHECK_THROWS(parse_report_format("xml"));
  }
}
