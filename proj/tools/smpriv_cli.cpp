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

// smpriv command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smpriv/smpriv.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kGuard = 3 };

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(smp_status s) {
  switch (s) {
    case SMP_OK: return kOk;
    case SMP_ERR_GUARD_EXCEEDED:
    case SMP_ERR_INCOMPLETE: return kGuard;
    case SMP_ERR_INVALID_ARGUMENT: return kUsage;
    default: return kData;
  }
}

void check(smp_status s, const std::string& what) {
  if (s != SMP_OK) throw Failure{exit_code_for(s), what + ": " + smp_last_error()};
}

void check_usage(smp_status s, const std::string& what) {
  if (s != SMP_OK) throw Failure{kUsage, what + ": " + smp_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Matrix = std::unique_ptr<smp_matrix, Deleter<smp_matrix, smp_matrix_free>>;
using Instance = std::unique_ptr<smp_instance, Deleter<smp_instance, smp_instance_free>>;
using Perms = std::unique_ptr<smp_permutations, Deleter<smp_permutations, smp_permutations_free>>;
using Marginals = std::unique_ptr<smp_marginals, Deleter<smp_marginals, smp_marginals_free>>;
using Report = std::unique_ptr<smp_report, Deleter<smp_report, smp_report_free>>;
using Joint = std::unique_ptr<smp_joint, Deleter<smp_joint, smp_joint_free>>;
using Config = std::unique_ptr<smp_config, Deleter<smp_config, smp_config_free>>;
using Table = std::unique_ptr<smp_table, Deleter<smp_table, smp_table_free>>;

std::string take(char* s) {
  std::string out(s ? s : "");
  smp_string_free(s);
  return out;
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kData, "cannot open '" + path + "'"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kData, "cannot write '" + path + "'"};
}

smp_format parse_format(const std::string& f) {
  return f == "csv" ? SMP_FORMAT_CSV : SMP_FORMAT_MARKDOWN;
}

Instance load_instance(const std::string& path) {
  smp_instance* raw = nullptr;
  check(smp_instance_parse(read_input(path).c_str(), &raw), path);
  return Instance(raw);
}

smp_guards make_guards(const std::string& mem, double seconds) {
  smp_guards g = smp_default_guards();
  if (!mem.empty()) check_usage(smp_parse_bytes(mem.c_str(), &g.memory_bytes), "--mem-budget");
  if (seconds > 0) g.time_ms = static_cast<std::uint64_t>(seconds * 1000.0);
  return g;
}

std::vector<double> parse_samples(const std::string& text, std::size_t meter) {
  std::vector<double> out;
  if (text.rfind("meter_id,", 0) == 0) {
    smp_matrix* raw = nullptr;
    check(smp_matrix_parse_csv(text.c_str(), &raw), "samples");
    Matrix m(raw);
    if (meter == 0 || meter > smp_matrix_meters(raw))
      throw Failure{kUsage, "--meter must lie in 1.." + std::to_string(smp_matrix_meters(raw))};
    for (std::size_t j = 0; j < smp_matrix_periods(raw); ++j) {
      int64_t v = 0;
      check(smp_matrix_reading(raw, meter - 1, j, &v), "samples");
      out.push_back(static_cast<double>(v));
    }
    return out;
  }
  std::istringstream is(text);
  std::string token;
  while (is >> token) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw Failure{kData, "not a number: '" + token + "'"};
    out.push_back(v);
  }
  return out;
}

smp_distribution make_distribution(const std::string& family, double mean, double sd) {
  if (family == "normal") return {SMP_FAMILY_NORMAL, mean, sd};
  return {SMP_FAMILY_EXPONENTIAL, mean, 0.0};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Re-identification attack and entropy measurement for anonymized smart-meter readings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", smp_version());

  // example
  auto* example = app.add_subcommand("example", "Walk through the built-in 3-meter example");

  // solve
  std::string solve_input, solve_format = "markdown", solve_mem;
  std::size_t solve_meter = 1, solve_enumerate = 0;
  double solve_threshold = 1.0, solve_seconds = 0;
  auto* solve = app.add_subcommand("solve", "Entropy report for one meter of an instance file");
  solve->add_option("instance", solve_input, "Instance file ('-' for stdin)")->required();
  solve->add_option("-m,--meter", solve_meter, "Target meter, 1-based")->check(CLI::PositiveNumber);
  solve->add_option("-f,--format", solve_format, "markdown or csv")
      ->check(CLI::IsMember({"markdown", "csv"}));
  solve->add_option("--threshold", solve_threshold, "List positions with at least this probability")
      ->check(CLI::Range(1e-12, 1.0));
  solve->add_option("--enumerate", solve_enumerate, "Also print up to this many solutions");
  solve->add_option("--mem-budget", solve_mem, "Count-table budget in bytes (K/M/G suffix)");
  solve->add_option("--time-budget", solve_seconds, "Wall-clock budget in seconds");

  // joint
  std::string joint_input;
  std::uint64_t joint_limit = 100'000'000;
  auto* joint = app.add_subcommand("joint", "All assignments consistent with every billing total");
  joint->add_option("instance", joint_input, "Instance file ('-' for stdin)")->required();
  joint->add_option("--work-limit", joint_limit, "Maximum placements tried")->check(CLI::PositiveNumber);

  // synth
  std::size_t synth_n = 8, synth_t = 15;
  double synth_target_mean = 100, synth_others_mean = 100, synth_target_sd = 0, synth_others_sd = 0;
  std::string synth_target_family = "exponential", synth_others_family = "exponential", synth_out;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic readings CSV");
  synth->add_option("-n,--meters", synth_n, "Meters")->check(CLI::PositiveNumber);
  synth->add_option("-t,--periods", synth_t, "Periods")->check(CLI::PositiveNumber);
  synth->add_option("--target-mean", synth_target_mean, "Mean reading of meter 1 (Wh)");
  synth->add_option("--others-mean", synth_others_mean, "Mean reading of the other meters (Wh)");
  synth->add_option("--target-family", synth_target_family)->check(CLI::IsMember({"exponential", "normal"}));
  synth->add_option("--others-family", synth_others_family)->check(CLI::IsMember({"exponential", "normal"}));
  synth->add_option("--target-sd", synth_target_sd, "Standard deviation for a normal target");
  synth->add_option("--others-sd", synth_others_sd, "Standard deviation for normal others");
  synth->add_option("-s,--seed", synth_seed, "Random seed");
  synth->add_option("-o,--output", synth_out, "Output file (default stdout)");

  // fit
  std::string fit_input, fit_format = "markdown";
  std::size_t fit_meter = 1;
  auto* fit = app.add_subcommand("fit", "Rank candidate reading distributions by Cramer-von Mises W^2");
  fit->add_option("samples", fit_input, "Whitespace-separated numbers, or a readings CSV")->required();
  fit->add_option("-m,--meter", fit_meter, "Meter to fit when the input is a readings CSV, 1-based");
  fit->add_option("-f,--format", fit_format)->check(CLI::IsMember({"markdown", "csv"}));

  // ingest
  std::string ingest_input, ingest_out, ingest_perms;
  std::uint64_t ingest_seed = 1;
  std::size_t ingest_n = 0, ingest_t = 0;
  auto* ingest = app.add_subcommand("ingest", "Turn a readings CSV into an anonymized instance file");
  ingest->add_option("readings", ingest_input, "Readings CSV (wh or kwh column)")->required();
  ingest->add_option("-s,--seed", ingest_seed, "Seed for shuffling (and submatrix selection)");
  ingest->add_option("-o,--output", ingest_out, "Instance file (default stdout)");
  ingest->add_option("--perms", ingest_perms, "Also write the secret permutations here");
  ingest->add_option("--meters", ingest_n, "Keep a random subset of this many meters");
  ingest->add_option("--periods", ingest_t, "Keep a random window of this many periods");

  // experiment
  std::string exp_config, exp_reps_out;
  std::vector<std::string> exp_sets;
  std::map<std::string, std::string> exp_flags;
  auto* experiment = app.add_subcommand("experiment", "Average-entropy grid over many instances");
  experiment->add_option("-c,--config", exp_config, "key=value config file");
  experiment->add_option("--set", exp_sets, "Override one key=value setting");
  experiment->add_option("--reps-out", exp_reps_out, "Write per-repetition CSV here");
  for (const char* key : {"mode", "n_list", "t_list", "target_mean", "others_mean", "reps", "seed",
                          "target_meter", "format", "workers", "mem_budget", "time_budget",
                          "input_file"}) {
    std::string flag = std::string("--") + key;
    for (auto& ch : flag) if (ch == '_') ch = '-';
    experiment->add_option_function<std::string>(
        flag, [key, &exp_flags](const std::string& v) { exp_flags[key] = v; },
        std::string("Config key ") + key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*example) {
      char* text = nullptr;
      check(smp_example_report(&text), "example");
      std::cout << take(text);
      return kOk;
    }

    if (*solve) {
      Instance inst = load_instance(solve_input);
      if (solve_meter > smp_instance_meters(inst.get()))
        throw Failure{kUsage, "--meter must lie in 1.." + std::to_string(smp_instance_meters(inst.get()))};
      const smp_guards guards = make_guards(solve_mem, solve_seconds);
      smp_marginals* mc = nullptr;
      check(smp_marginals_compute(inst.get(), solve_meter - 1, &guards, &mc), "solve");
      Marginals mc_holder(mc);
      smp_report* rep = nullptr;
      check(smp_report_compute(mc, &rep), "solve");
      Report rep_holder(rep);
      char* text = nullptr;
      check(smp_report_render(rep, parse_format(solve_format), solve_threshold, &text), "solve");
      std::cout << take(text);
      if (solve_enumerate > 0) {
        check(smp_enumerate_render(inst.get(), solve_meter - 1, solve_enumerate, &guards, &text),
              "enumerate");
        std::cout << (solve_format == "csv" ? "" : "\n## Solutions\n\n") << take(text);
      }
      return kOk;
    }

    if (*joint) {
      Instance inst = load_instance(joint_input);
      smp_joint* j = nullptr;
      check(smp_joint_solve(inst.get(), joint_limit, &j), "joint");
      Joint holder(j);
      char* text = nullptr;
      check(smp_joint_render(j, &text), "joint");
      std::cout << take(text);
      if (!smp_joint_exhausted(j)) {
        std::cerr << "joint: work limit reached, solution list is partial\n";
        return kGuard;
      }
      return kOk;
    }

    if (*synth) {
      smp_matrix* m = nullptr;
      check_usage(smp_matrix_sample(synth_n, synth_t,
                                    make_distribution(synth_target_family, synth_target_mean, synth_target_sd),
                                    make_distribution(synth_others_family, synth_others_mean, synth_others_sd),
                                    synth_seed, &m),
                  "synth");
      Matrix holder(m);
      char* text = nullptr;
      check(smp_matrix_write_csv(m, &text), "synth");
      write_output(synth_out, take(text));
      return kOk;
    }

    if (*fit) {
      const auto samples = parse_samples(read_input(fit_input), fit_meter);
      char* text = nullptr;
      check(smp_fit_render(samples.data(), samples.size(), parse_format(fit_format), &text), "fit");
      std::cout << take(text);
      return kOk;
    }

    if (*ingest) {
      smp_matrix* m = nullptr;
      check(smp_matrix_parse_csv(read_input(ingest_input).c_str(), &m), ingest_input);
      Matrix matrix(m);
      if (ingest_n || ingest_t) {
        smp_matrix* sub = nullptr;
        check(smp_matrix_select(m, ingest_n ? ingest_n : smp_matrix_meters(m),
                                ingest_t ? ingest_t : smp_matrix_periods(m), ingest_seed, &sub),
              "ingest");
        matrix.reset(sub);
      }
      smp_instance* inst = nullptr;
      smp_permutations* perms = nullptr;
      check(smp_anonymize(matrix.get(), ingest_seed, &inst, &perms), "ingest");
      Instance inst_holder(inst);
      Perms perms_holder(perms);
      char* text = nullptr;
      check(smp_instance_write(inst, &text), "ingest");
      write_output(ingest_out, take(text));
      if (!ingest_perms.empty()) {
        check(smp_permutations_write(perms, &text), "ingest");
        write_output(ingest_perms, take(text));
      }
      return kOk;
    }

    if (*experiment) {
      smp_config* cfg = nullptr;
      check(smp_config_create(&cfg), "experiment");
      Config holder(cfg);
      if (!exp_config.empty()) check_usage(smp_config_parse(cfg, read_input(exp_config).c_str()), exp_config);
      for (const auto& kv : exp_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Failure{kUsage, "--set expects key=value, got '" + kv + "'"};
        check_usage(smp_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set");
      }
      for (const auto& [key, value] : exp_flags)
        check_usage(smp_config_set(cfg, key.c_str(), value.c_str()), "--" + key);

      check_usage(smp_config_validate(cfg), "experiment");

      smp_table* table = nullptr;
      check(smp_experiment_run(cfg, &table), "experiment");
      Table table_holder(table);
      char* text = nullptr;
      check(smp_table_emit(table, smp_config_format(cfg), &text), "experiment");
      std::cout << take(text);
      if (!exp_reps_out.empty()) {
        check(smp_table_emit_repetitions(table, &text), "experiment");
        write_output(exp_reps_out, take(text));
      }
      if (smp_table_infeasible(table)) {
        std::cerr << "experiment: some cells exceeded the solver guards\n";
        return kGuard;
      }
      return kOk;
    }
  } catch (const Failure& f) {
    std::cerr << "smpriv: " << f.message << '\n';
    return f.code;
  }
  return kUsage;
}
