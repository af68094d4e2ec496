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

#include "smpriv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "smpriv/errors.hpp"
#include "smpriv/ingest.hpp"
#include "smpriv/mcssp.hpp"
#include "smpriv/privacy.hpp"
#include "smpriv/rng.hpp"
#include "smpriv/stats.hpp"

namespace smpriv {

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw InvalidInput("invalid value '" + std::string(value) + "' for " + std::string(key));
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return v;
}

double to_double(std::string_view key, std::string_view value) {
  const std::string s(value);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    bad_value(key, value);
  }
  if (used != s.size() || !std::isfinite(v)) bad_value(key, value);
  return v;
}

std::vector<std::size_t> to_list(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t end = value.find_first_of(", ", start);
    if (end == std::string_view::npos) end = value.size();
    const auto item = value.substr(start, end - start);
    if (!item.empty()) out.push_back(static_cast<std::size_t>(to_uint(key, item)));
    start = end + 1;
  }
  if (out.empty()) bad_value(key, value);
  return out;
}

std::uint64_t to_bytes(std::string_view key, std::string_view value) {
  std::uint64_t scale = 1;
  if (!value.empty()) {
    switch (value.back()) {
      case 'K': case 'k': scale = 1ull << 10; break;
      case 'M': case 'm': scale = 1ull << 20; break;
      case 'G': case 'g': scale = 1ull << 30; break;
      default: break;
    }
    if (scale != 1) value.remove_suffix(1);
  }
  return to_uint(key, value) * scale;
}

SolverGuards guards_of(const ExperimentConfig& c) {
  SolverGuards g;
  g.memory_bytes = c.mem_budget;
  g.time = std::chrono::milliseconds(static_cast<std::int64_t>(c.time_budget * 1000.0));
  return g;
}

RepetitionResult attack(const ExperimentConfig& config, const ReadingMatrix& matrix,
                        std::uint64_t seed, std::size_t rep) {
  RepetitionResult r;
  r.rep = rep;
  r.seed = seed;
  const auto [inst, perms] = anonymize(build_ground_truth(matrix), derive_seed(seed, {2}));
  try {
    const MarginalCounts mc = marginal_counts(inst, config.target_meter - 1, guards_of(config));
    r.average_entropy = entropy_report(mc).average;
  } catch (const GuardExceeded&) {
    r.status = RunStatus::GuardExceeded;
  }
  return r;
}

void summarize(ExperimentCell& cell) {
  cell.max_entropy = std::log2(static_cast<double>(cell.n));
  double sum = 0.0;
  cell.completed = 0;
  for (const auto& r : cell.reps) {
    if (r.status != RunStatus::Ok) {
      cell.infeasible = true;
      continue;
    }
    sum += r.average_entropy;
    ++cell.completed;
  }
  cell.mean = cell.completed ? sum / static_cast<double>(cell.completed) : 0.0;
  double ss = 0.0;
  for (const auto& r : cell.reps)
    if (r.status == RunStatus::Ok) ss += (r.average_entropy - cell.mean) * (r.average_entropy - cell.mean);
  cell.stddev = cell.completed > 1 ? std::sqrt(ss / static_cast<double>(cell.completed - 1)) : 0.0;
}

void validate_grid(const ExperimentConfig& c) {
  if (c.n_list.empty() || c.t_list.empty()) throw InvalidInput("n_list and t_list must be non-empty");
  for (std::size_t n : c.n_list)
    if (n == 0) throw InvalidInput("n values must be at least 1");
  for (std::size_t t : c.t_list)
    if (t == 0) throw InvalidInput("t values must be at least 1");
  if (c.reps == 0) throw InvalidInput("reps must be at least 1");
  if (c.workers == 0) throw InvalidInput("workers must be at least 1");
  if (!(c.target_mean > 0.0) || !(c.others_mean > 0.0)) throw InvalidInput("means must be positive");
  if (!(c.time_budget > 0.0)) throw InvalidInput("time_budget must be positive");
  const std::size_t smallest = *std::min_element(c.n_list.begin(), c.n_list.end());
  if (c.target_meter == 0 || c.target_meter > smallest)
    throw InvalidInput("target_meter must lie in 1.." + std::to_string(smallest));
}

ExperimentTable run_grid(const ExperimentConfig& config, const ReadingMatrix* source) {
  validate_grid(config);
  ExperimentTable table;
  table.n_list = config.n_list;
  table.t_list = config.t_list;
  for (std::size_t t : config.t_list)
    for (std::size_t n : config.n_list) {
      ExperimentCell cell;
      cell.n = n;
      cell.t = t;
      cell.reps.resize(config.reps);
      table.cells.push_back(std::move(cell));
    }

  const std::size_t jobs = table.cells.size() * config.reps;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < jobs;) {
      ExperimentCell& cell = table.cells[job / config.reps];
      const std::size_t rep = job % config.reps;
      try {
        if (source) {
          const std::uint64_t seed = repetition_seed(config.seed, cell.n, cell.t, rep);
          cell.reps[rep] = attack(config, select_submatrix(*source, cell.n, cell.t, derive_seed(seed, {1})),
                                  seed, rep);
        } else {
          cell.reps[rep] = run_synthetic_repetition(config, cell.n, cell.t, rep);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
      }
    }
  };
  const std::size_t threads = std::min(config.workers, jobs);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (auto& cell : table.cells) summarize(cell);
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  validate_grid(*this);
  if (mode == ExperimentMode::RealFile && input_file.empty())
    throw InvalidInput("real mode needs input_file");
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "mode") {
    if (value == "synthetic")
      c.mode = ExperimentMode::Synthetic;
    else if (value == "real" || value == "real-file")
      c.mode = ExperimentMode::RealFile;
    else
      bad_value(key, value);
  } else if (key == "n_list") {
    c.n_list = to_list(key, value);
  } else if (key == "t_list") {
    c.t_list = to_list(key, value);
  } else if (key == "target_mean") {
    c.target_mean = to_double(key, value);
  } else if (key == "others_mean") {
    c.others_mean = to_double(key, value);
  } else if (key == "reps") {
    c.reps = static_cast<std::size_t>(to_uint(key, value));
  } else if (key == "seed") {
    c.seed = to_uint(key, value);
  } else if (key == "target_meter") {
    c.target_meter = static_cast<std::size_t>(to_uint(key, value));
  } else if (key == "format") {
    if (value == "csv")
      c.format = TableFormat::Csv;
    else if (value == "markdown" || value == "md")
      c.format = TableFormat::Markdown;
    else
      bad_value(key, value);
  } else if (key == "workers") {
    c.workers = static_cast<std::size_t>(to_uint(key, value));
  } else if (key == "mem_budget") {
    c.mem_budget = to_bytes(key, value);
  } else if (key == "time_budget") {
    c.time_budget = to_double(key, value);
  } else if (key == "input_file") {
    c.input_file = std::string(value);
  } else {
    throw InvalidInput("unknown setting '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, "expected key=value");
    try {
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const InvalidInput& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return base;
}

const ExperimentCell& ExperimentTable::cell(std::size_t t, std::size_t n) const {
  for (const auto& c : cells)
    if (c.t == t && c.n == n) return c;
  throw InvalidInput("no cell for t=" + std::to_string(t) + ", n=" + std::to_string(n));
}

bool ExperimentTable::any_infeasible() const {
  return std::any_of(cells.begin(), cells.end(), [](const auto& c) { return c.infeasible; });
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t n, std::size_t t, std::size_t rep) {
  return derive_seed(master, {n, t, rep});
}

RepetitionResult run_synthetic_repetition(const ExperimentConfig& config, std::size_t n,
                                          std::size_t t, std::size_t rep) {
  const std::uint64_t seed = repetition_seed(config.seed, n, t, rep);
  const ReadingMatrix matrix = sample_reading_matrix(
      n, t, DistributionSpec::exponential(config.target_mean),
      DistributionSpec::exponential(config.others_mean), derive_seed(seed, {1}));
  return attack(config, matrix, seed, rep);
}

ExperimentTable run_experiment(const ExperimentConfig& config) {
  if (config.mode == ExperimentMode::Synthetic) return run_grid(config, nullptr);
  config.validate();
  std::ifstream in(config.input_file, std::ios::binary);
  if (!in) throw InvalidInput("cannot open input_file '" + config.input_file + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return run_experiment(config, parse_readings(text.str()));
}

ExperimentTable run_experiment(const ExperimentConfig& config, const ReadingMatrix& source) {
  const std::size_t max_n = *std::max_element(config.n_list.begin(), config.n_list.end());
  const std::size_t max_t = *std::max_element(config.t_list.begin(), config.t_list.end());
  if (source.meters() < max_n || source.periods() < max_t)
    throw InvalidInput("source matrix is " + std::to_string(source.meters()) + "x" +
                       std::to_string(source.periods()) + ", grid needs " + std::to_string(max_n) +
                       "x" + std::to_string(max_t));
  return run_grid(config, &source);
}

std::string emit_table(const ExperimentTable& table, TableFormat format) {
  std::ostringstream os;
  if (format == TableFormat::Csv) {
    os << "t,n,avg_entropy,max_entropy,reps,stddev\n";
    for (const auto& c : table.cells) {
      os << c.t << ',' << c.n << ','
         << (c.infeasible ? std::string("infeasible") : fixed(c.mean, 4)) << ','
         << fixed(c.max_entropy, 4) << ',' << c.completed << ','
         << (c.infeasible ? std::string("NA") : fixed(c.stddev, 4)) << '\n';
    }
    return os.str();
  }
  os << "|              |";
  for (std::size_t n : table.n_list) os << " n = " << n << " |";
  os << "\n|---|";
  for (std::size_t k = 0; k < table.n_list.size(); ++k) os << "---|";
  os << "\n| Max. entropy |";
  for (std::size_t n : table.n_list) os << ' ' << fixed(std::log2(static_cast<double>(n)), 4) << " |";
  os << '\n';
  for (std::size_t t : table.t_list) {
    os << "| t = " << t << " |";
    for (std::size_t n : table.n_list) {
      const auto& c = table.cell(t, n);
      os << ' ' << (c.infeasible ? std::string("infeasible") : fixed(c.mean, 4)) << " |";
    }
    os << '\n';
  }
  return os.str();
}

std::string emit_repetitions(const ExperimentTable& table) {
  std::ostringstream os;
  os << "t,n,rep,seed,avg_entropy,status\n";
  for (const auto& c : table.cells)
    for (const auto& r : c.reps)
      os << c.t << ',' << c.n << ',' << r.rep + 1 << ',' << r.seed << ','
         << (r.status == RunStatus::Ok ? fixed(r.average_entropy, 6) : std::string("NA")) << ','
         << (r.status == RunStatus::Ok ? "ok" : "guard_exceeded") << '\n';
  return os.str();
}

}  // namespace smpriv
