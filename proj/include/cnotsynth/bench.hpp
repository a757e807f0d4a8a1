// Copyright 2026 The cnotsynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cnotsynth/generators.hpp"
#include "cnotsynth/ppo.hpp"

namespace cnotsynth {

struct BenchConfig {
  std::vector<int> sizes = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::vector<Setting> settings = {Setting::rare, Setting::medium,
                                   Setting::overcooked};
  int suite_size = 100;
  int runs_per_matrix = 100;
  /// Any of: pmh, rl, pmh-star, exact. rl needs a policy; pmh-star only
  /// applies when n exceeds the policy size; exact requires n <= 5.
  std::vector<std::string> methods = {"pmh"};
  uint64_t seed = 0;
  LogBase log_base = LogBase::natural;
  int stripe_width = 2;
  int jobs = 1;
  /// Populate wall_time in records. Off by default so repeated runs with the
  /// same seed produce byte-identical CSV output.
  bool timings = false;
};

struct BenchRecord {
  std::string method;
  Setting setting = Setting::rare;
  int n = 0;
  int matrix_id = 0;
  int cnot_count = 0;
  int prefix_count = 0;  // striping portion, 0 when no reduction ran
  int block_count = 0;   // gates inside the embedded block (embeds only)
  bool verified = false;
  double wall_time = 0.0;
  bool fallback = false;
};

/// Runs the configured methods over freshly generated suites. Every circuit
/// is verified before a record is admitted; an unverifiable circuit aborts
/// the run. Matrices are processed with per-matrix derived seeds, so the
/// output is identical for any jobs count.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg,
                                       const Checkpoint* policy);

struct SummaryRow {
  std::string method;
  Setting setting = Setting::rare;
  int n = 0;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  int fallbacks = 0;
};

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);

/// Aligned text table, one row per size, RL and PMH columns per setting.
std::string render_summary_table(const std::vector<SummaryRow>& rows);

struct AblationRow {
  Setting setting = Setting::rare;
  int n = 0;
  double rl_mean = 0.0;
  double pmh_star_mean = 0.0;
  /// pmh_star_mean - rl_mean; positive means the RL pipeline saves gates.
  double difference = 0.0;
};

std::vector<AblationRow> ablation_pmh_star(
    const std::vector<BenchRecord>& records);

std::string records_to_csv(const std::vector<BenchRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);
std::string ablation_to_csv(const std::vector<AblationRow>& rows);

/// Writes records.csv, summary.csv, ablation.csv and plotdata/*.csv under
/// dir (created if needed).
void write_benchmark_outputs(const std::string& dir,
                             const std::vector<BenchRecord>& records);

/// Long-format per-group means (lineplot.csv) and per-matrix counts
/// (distributions.csv).
void emit_plot_data(const std::string& dir,
                    const std::vector<BenchRecord>& records,
                    const std::vector<SummaryRow>& summary);

}  // namespace cnotsynth
