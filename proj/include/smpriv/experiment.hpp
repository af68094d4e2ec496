// Copyright 2026 The smpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "smpriv/model.hpp"
#include "smpriv/render.hpp"

namespace smpriv {

enum class ExperimentMode { Synthetic, RealFile };

/// One grid of attack runs. Keys in the text form are the field names
/// below, except `mode` (synthetic | real), `format` (csv | markdown),
/// `mem_budget` (bytes, optional K/M/G suffix) and `time_budget` (seconds).
struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::Synthetic;
  std::vector<std::size_t> n_list{2, 4, 8, 16, 32};
  std::vector<std::size_t> t_list{15, 30, 60};
  double target_mean = 100.0;
  double others_mean = 100.0;
  std::size_t reps = 20;
  std::uint64_t seed = 1;
  std::size_t target_meter = 1;  // 1-based
  TableFormat format = TableFormat::Markdown;
  std::size_t workers = 1;
  std::uint64_t mem_budget = std::uint64_t{4} << 30;
  double time_budget = 600.0;
  std::string input_file;

  void validate() const;
};

/// Sets one `key=value` setting. Throws InvalidInput on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat `key=value` lines; blank lines and `#` comments are skipped.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});

enum class RunStatus { Ok, GuardExceeded };

struct RepetitionResult {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::Ok;
  double average_entropy = 0.0;
};

struct ExperimentCell {
  std::size_t n = 0;
  std::size_t t = 0;
  std::vector<RepetitionResult> reps;
  double mean = 0.0;    // over completed repetitions
  double stddev = 0.0;  // sample standard deviation over completed repetitions
  std::size_t completed = 0;
  bool infeasible = false;  // some repetition hit a guard
  double max_entropy = 0.0;
};

struct ExperimentTable {
  std::vector<std::size_t> n_list;
  std::vector<std::size_t> t_list;
  std::vector<ExperimentCell> cells;  // t-major, matching t_list x n_list

  const ExperimentCell& cell(std::size_t t, std::size_t n) const;
  bool any_infeasible() const;
};

/// Seed of repetition `rep` in cell (n, t). Depends on nothing else, so
/// changing the grid or the repetition count leaves other runs untouched.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t n, std::size_t t, std::size_t rep);

/// Average entropy of one synthetic instance: sample, anonymize, attack.
RepetitionResult run_synthetic_repetition(const ExperimentConfig& config, std::size_t n,
                                          std::size_t t, std::size_t rep);

/// Runs every cell and repetition. Real-file mode loads `input_file`.
ExperimentTable run_experiment(const ExperimentConfig& config);
/// Real-file mode over an already loaded matrix.
ExperimentTable run_experiment(const ExperimentConfig& config, const ReadingMatrix& source);

/// CSV `t,n,avg_entropy,max_entropy,reps,stddev`, or a markdown grid with a
/// `Max. entropy` row and one row per t.
std::string emit_table(const ExperimentTable& table, TableFormat format);

/// Per-repetition CSV `t,n,rep,seed,avg_entropy,status`.
std::string emit_repetitions(const ExperimentTable& table);

}  // namespace smpriv
