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

// Command-line front end: simulate, estimate, sweep and report.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "contact_est/harness.hpp"
#include "contact_est/log_io.hpp"
#include "contact_est/report.hpp"

namespace ce = contact_est;

namespace {

void print_trial(const ce::TrialResult& r) {
  std::printf("accuracy %.4f (after %.3f s warm-up %.4f), transitions predicted %ld / true %ld\n",
              r.accuracy, r.warmup, r.accuracy_after_warmup, r.predicted_transitions, r.true_transitions);
}

void print_sweep(const ce::SweepResult& s) {
  std::printf("%10s %9s %10s\n", "snr_db", "completed", "mean_acc");
  for (std::size_t l = 0; l < s.snr_levels_db.size(); ++l) {
    const auto mean = s.mean_accuracy(l);
    std::printf("%10g %5zu/%-3d %10s\n", s.snr_levels_db[l], s.completed(l), s.trials_per_level,
                mean ? std::to_string(*mean).c_str() : "-");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact-mode estimation for a planar five-link walker"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);

  // Every configuration key is also a flag; flags win over the file.
  std::map<std::string, std::string> overrides;
  for (const auto& key : ce::HarnessConfig::known_keys()) {
    app.add_option("--" + key, overrides[key], "overrides '" + key + "' from the configuration file");
  }

  std::string format_text = "json";
  auto* sim = app.add_subcommand("simulate", "simulate one noisy gait trial and write its log");
  std::string sim_out;
  sim->add_option("-o,--out", sim_out, "log file (CSV)")->required();

  auto* est = app.add_subcommand("estimate", "replay a trial log through the estimator");
  std::string est_in, est_out;
  est->add_option("-l,--log", est_in, "log file written by 'simulate'")->required()->check(CLI::ExistingFile);
  est->add_option("-o,--out", est_out, "report path");
  est->add_option("-f,--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("sweep", "accuracy against measurement SNR");
  std::string sweep_out;
  sweep->add_option("-o,--out", sweep_out, "report path");
  sweep->add_option("-f,--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* rep = app.add_subcommand("report", "re-render a saved JSON report");
  std::string rep_in, rep_out;
  rep->add_option("-i,--in", rep_in, "JSON report")->required()->check(CLI::ExistingFile);
  rep->add_option("-o,--out", rep_out, "output path")->required();
  rep->add_option("-f,--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto format = ce::parse_report_format(format_text);

    if (rep->parsed()) {
      const auto loaded = ce::load_report(rep_in);
      std::visit(
          [&](const auto& r) {
            ce::emit_report(r, format, rep_out);
            if constexpr (std::is_same_v<std::decay_t<decltype(r)>, ce::TrialResult>) {
              print_trial(r);
            } else {
              print_sweep(r);
            }
          },
          loaded);
      return 0;
    }

    ce::KeyValueConfig kv = config_path.empty() ? ce::KeyValueConfig() : ce::KeyValueConfig::load(config_path);
    for (const auto& key : ce::HarnessConfig::known_keys()) {
      if (app.count("--" + key) > 0) kv.set(key, overrides[key]);
    }
    const auto config = ce::HarnessConfig::from_config(kv);

    if (sim->parsed()) {
      const auto trial = ce::simulate_trial(config.model, config.gait, config.snr_db, config.seed);
      ce::export_log(ce::TrialLog::from_trial(trial), sim_out);
      std::printf("wrote %zu frames (%zu truth segments) to %s\n", trial.frames.size(), trial.truth.size(),
                  sim_out.c_str());
    } else if (est->parsed()) {
      const auto log = ce::import_log(est_in);
      const auto result =
          ce::evaluate_frames(log.frames, log.truth, config.model, config.estimator, config.warmup);
      print_trial(result);
      if (!est_out.empty()) ce::emit_report(result, format, est_out);
    } else if (sweep->parsed()) {
      const auto result = ce::snr_sweep(config);
      print_sweep(result);
      if (!sweep_out.empty()) ce::emit_report(result, format, sweep_out);
      for (const auto& level : result.trials) {
        for (const auto& t : level) {
          if (!t.failure.empty()) std::fprintf(stderr, "trial seed %llu missing: %s\n",
                                               static_cast<unsigned long long>(t.seed), t.failure.c_str());
        }
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "contact-est: %s\n", e.what());
    return 1;
  }
  return 0;
}
