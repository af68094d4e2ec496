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

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "smpriv/smpriv.h"

namespace {

std::string take(char* s) {
  std::string out(s ? s : "");
  smp_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(smp_version()) == "0.1.0");
  CHECK(std::string(smp_status_name(SMP_OK)) == "ok");
  CHECK(std::string(smp_status_name(SMP_ERR_GUARD_EXCEEDED)).size() > 0);
  smp_instance* inst = nullptr;
  CHECK(smp_instance_parse(nullptr, &inst) == SMP_ERR_INVALID_ARGUMENT);
  CHECK(smp_instance_parse("meters x\nperiods 1\ntotals 1\nperiod 1 1\n", &inst) == SMP_ERR_PARSE);
  CHECK(std::string(smp_last_error()).find("line 1") != std::string::npos);
  CHECK(smp_instance_parse("meters 2\nperiods 1\ntotals 1 9\nperiod 1 1 2\n", &inst) ==
        SMP_ERR_INVALID_DATA);
  CHECK(inst == nullptr);
}

TEST_CASE("example through the C interface") {
  smp_instance* inst = nullptr;
  REQUIRE(smp_instance_example(&inst) == SMP_OK);
  CHECK(smp_instance_meters(inst) == 3);
  CHECK(smp_instance_periods(inst) == 9);

  char* text = nullptr;
  REQUIRE(smp_count_solutions(inst, 991, nullptr, &text) == SMP_OK);
  CHECK(take(text) == "22");

  smp_marginals* mc = nullptr;
  REQUIRE(smp_marginals_compute(inst, 0, nullptr, &mc) == SMP_OK);
  REQUIRE(smp_marginals_total(mc, &text) == SMP_OK);
  CHECK(take(text) == "22");
  REQUIRE(smp_marginals_count(mc, 3, 1, &text) == SMP_OK);
  CHECK(take(text) == "8");
  double p = 0;
  REQUIRE(smp_marginals_probability(mc, 3, 1, &p) == SMP_OK);
  CHECK(p == doctest::Approx(8.0 / 22));
  CHECK(smp_marginals_count(mc, 9, 0, &text) == SMP_ERR_INVALID_ARGUMENT);

  smp_report* report = nullptr;
  REQUIRE(smp_report_compute(mc, &report) == SMP_OK);
  smp_marginals_free(mc);  // the report keeps what it needs
  CHECK(smp_report_periods(report) == 9);
  double h = 0;
  REQUIRE(smp_report_period_entropy(report, 0, &h) == SMP_OK);
  CHECK(std::abs(h - 0.2668) < 5e-4);
  CHECK(smp_report_max_entropy(report) == doctest::Approx(std::log2(3.0)));
  REQUIRE(smp_report_render(report, SMP_FORMAT_CSV, 1.0, &text) == SMP_OK);
  CHECK(take(text).rfind("period,position,value,count,probability,entropy\n", 0) == 0);
  smp_report_free(report);

  std::vector<size_t> positions(5 * 9);
  size_t emitted = 0;
  int truncated = 0;
  REQUIRE(smp_enumerate(inst, 0, 5, nullptr, positions.data(), &emitted, &truncated) == SMP_OK);
  CHECK(emitted == 5);
  CHECK(truncated == 1);
  REQUIRE(smp_enumerate(inst, 0, 100, nullptr, nullptr, &emitted, &truncated) == SMP_OK);
  CHECK(emitted == 22);
  CHECK(truncated == 0);

  smp_joint* joint = nullptr;
  REQUIRE(smp_joint_solve(inst, 0, &joint) == SMP_OK);
  CHECK(smp_joint_count(joint) == 3);
  CHECK(smp_joint_exhausted(joint) == 1);
  int agreed = 0;
  int64_t value = 0;
  REQUIRE(smp_joint_agreed(joint, 0, 4, &agreed, &value) == SMP_OK);
  CHECK(agreed == 1);
  CHECK(value == 140);
  REQUIRE(smp_joint_agreed(joint, 0, 1, &agreed, &value) == SMP_OK);
  CHECK(agreed == 0);
  smp_joint_free(joint);

  REQUIRE(smp_joint_solve(inst, 1, &joint) == SMP_OK);
  CHECK(smp_joint_exhausted(joint) == 0);
  CHECK(smp_joint_agreed(joint, 0, 4, &agreed, &value) == SMP_ERR_INCOMPLETE);
  smp_joint_free(joint);

  REQUIRE(smp_instance_write(inst, &text) == SMP_OK);
  smp_instance* back = nullptr;
  const std::string written = take(text);
  REQUIRE(smp_instance_parse(written.c_str(), &back) == SMP_OK);
  REQUIRE(smp_instance_write(back, &text) == SMP_OK);
  CHECK(take(text) == written);
  smp_instance_free(back);
  smp_instance_free(inst);

  REQUIRE(smp_example_report(&text) == SMP_OK);
  CHECK(take(text).find("N = 22") != std::string::npos);
}

TEST_CASE("unreachable totals and guards") {
  const int64_t values[] = {1, 2};
  const int64_t totals[] = {0, 3};
  smp_instance* inst = nullptr;
  REQUIRE(smp_instance_create(2, 1, values, totals, &inst) == SMP_OK);
  smp_marginals* mc = nullptr;
  CHECK(smp_marginals_compute(inst, 0, nullptr, &mc) == SMP_ERR_NO_SOLUTIONS);
  smp_instance_free(inst);

  smp_matrix* m = nullptr;
  const smp_distribution e{SMP_FAMILY_EXPONENTIAL, 100, 0};
  REQUIRE(smp_matrix_sample(16, 40, e, e, 3, &m) == SMP_OK);
  smp_permutations* perms = nullptr;
  REQUIRE(smp_anonymize(m, 5, &inst, &perms) == SMP_OK);
  size_t pos = 0;
  CHECK(smp_permutations_position(perms, 0, 0, &pos) == SMP_OK);
  CHECK(pos < 16);
  smp_guards tiny = smp_default_guards();
  tiny.memory_bytes = 1024;
  CHECK(smp_marginals_compute(inst, 0, &tiny, &mc) == SMP_ERR_GUARD_EXCEEDED);
  CHECK(smp_marginals_compute(inst, 16, nullptr, &mc) == SMP_ERR_INVALID_ARGUMENT);
  smp_permutations_free(perms);
  smp_instance_free(inst);
  smp_matrix_free(m);
}

TEST_CASE("matrices and fitting") {
  const int64_t rows[] = {1, 2, 3, 4, 5, 6};
  smp_matrix* m = nullptr;
  REQUIRE(smp_matrix_create(2, 3, rows, &m) == SMP_OK);
  int64_t total = 0;
  REQUIRE(smp_matrix_total(m, 1, &total) == SMP_OK);
  CHECK(total == 15);
  char* text = nullptr;
  REQUIRE(smp_matrix_write_csv(m, &text) == SMP_OK);
  smp_matrix* back = nullptr;
  REQUIRE(smp_matrix_parse_csv(take(text).c_str(), &back) == SMP_OK);
  int64_t v = 0;
  REQUIRE(smp_matrix_reading(back, 1, 2, &v) == SMP_OK);
  CHECK(v == 6);
  smp_matrix* sub = nullptr;
  REQUIRE(smp_matrix_select(m, 1, 2, 9, &sub) == SMP_OK);
  CHECK(smp_matrix_meters(sub) == 1);
  CHECK(smp_matrix_periods(sub) == 2);
  CHECK(smp_matrix_select(m, 3, 2, 9, &sub) == SMP_ERR_INVALID_DATA);
  smp_matrix_free(sub);
  smp_matrix_free(back);
  smp_matrix_free(m);
  CHECK(smp_matrix_parse_csv("meter_id,period,kwh\na,1,0.1234\n", &m) == SMP_ERR_PARSE);

  const double median[] = {100 * std::log(2.0)};
  double w2 = 0;
  REQUIRE(smp_cvm(median, 1, {SMP_FAMILY_EXPONENTIAL, 100, 0}, &w2) == SMP_OK);
  CHECK(w2 == doctest::Approx(1.0 / 12));
  const double samples[] = {12, 40, 95, 150, 310, 8, 77};
  smp_fit fits[2];
  size_t count = 0;
  REQUIRE(smp_fit_rank(samples, 7, fits, &count) == SMP_OK);
  CHECK(count == 2);
  CHECK(fits[0].cvm <= fits[1].cvm);
  REQUIRE(smp_fit_render(samples, 7, SMP_FORMAT_CSV, &text) == SMP_OK);
  CHECK(take(text).rfind("rank,family,mean,sd,rate_umvue,cvm,samples\n", 0) == 0);
}

TEST_CASE("experiments through the C interface") {
  smp_config* c = nullptr;
  REQUIRE(smp_config_create(&c) == SMP_OK);
  REQUIRE(smp_config_parse(c, "n_list=2,3\nt_list=5\nreps=2\nformat=csv\n") == SMP_OK);
  CHECK(smp_config_format(c) == SMP_FORMAT_CSV);
  CHECK(smp_config_set(c, "nonsense", "1") == SMP_ERR_INVALID_DATA);
  CHECK(smp_config_parse(c, "reps=two\n") == SMP_ERR_PARSE);
  REQUIRE(smp_config_set(c, "reps", "2") == SMP_OK);
  CHECK(smp_config_validate(c) == SMP_OK);
  uint64_t bytes = 0;
  REQUIRE(smp_parse_bytes("2K", &bytes) == SMP_OK);
  CHECK(bytes == 2048);
  CHECK(smp_parse_bytes("lots", &bytes) != SMP_OK);

  smp_table* t = nullptr;
  REQUIRE(smp_experiment_run(c, &t) == SMP_OK);
  CHECK(smp_table_infeasible(t) == 0);
  double mean = -1, sd = -1;
  size_t completed = 0;
  int infeasible = 1;
  REQUIRE(smp_table_cell(t, 5, 3, &mean, &sd, &completed, &infeasible) == SMP_OK);
  CHECK(mean >= 0);
  CHECK(mean <= std::log2(3.0) + 1e-12);
  CHECK(completed == 2);
  CHECK(infeasible == 0);
  char* text = nullptr;
  REQUIRE(smp_table_emit(t, SMP_FORMAT_CSV, &text) == SMP_OK);
  CHECK(take(text).rfind("t,n,avg_entropy,max_entropy,reps,stddev\n5,2,", 0) == 0);
  REQUIRE(smp_table_emit_repetitions(t, &text) == SMP_OK);
  CHECK(take(text).find("5,3,2,") != std::string::npos);
  smp_table_free(t);

  REQUIRE(smp_config_set(c, "reps", "0") == SMP_OK);
  CHECK(smp_config_validate(c) == SMP_ERR_INVALID_DATA);
  CHECK(smp_experiment_run(c, &t) == SMP_ERR_INVALID_DATA);
  smp_config_free(c);
}
