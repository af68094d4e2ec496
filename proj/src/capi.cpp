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

#include "smpriv/smpriv.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "smpriv/errors.hpp"
#include "smpriv/example.hpp"
#include "smpriv/experiment.hpp"
#include "smpriv/ingest.hpp"
#include "smpriv/joint.hpp"
#include "smpriv/mcssp.hpp"
#include "smpriv/model.hpp"
#include "smpriv/privacy.hpp"
#include "smpriv/render.hpp"
#include "smpriv/stats.hpp"

struct smp_matrix {
  smpriv::ReadingMatrix value;
};
struct smp_instance {
  smpriv::AnonymizedInstance value;
};
struct smp_permutations {
  smpriv::PermutationRecord value;
};
struct smp_marginals {
  smpriv::AnonymizedInstance instance;
  smpriv::MarginalCounts counts;
};
struct smp_report {
  std::shared_ptr<const smp_marginals> source;
  smpriv::EntropyReport value;
};
struct smp_joint {
  smpriv::JointSolutionSet value;
  std::optional<std::vector<smpriv::AgreedAssignment>> agreed;
};
struct smp_config {
  smpriv::ExperimentConfig value;
};
struct smp_table {
  smpriv::ExperimentTable value;
};

namespace {

thread_local std::string last_error;

// Thrown by the C layer itself for bad handles and indices.
struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
smp_status guarded(F&& body) noexcept {
  try {
    body();
    return SMP_OK;
  } catch (const ArgumentError& e) {
    last_error = e.what();
    return SMP_ERR_INVALID_ARGUMENT;
  } catch (const smpriv::ParseError& e) {
    last_error = e.what();
    return SMP_ERR_PARSE;
  } catch (const smpriv::NoSolutions& e) {
    last_error = e.what();
    return SMP_ERR_NO_SOLUTIONS;
  } catch (const smpriv::GuardExceeded& e) {
    last_error = e.what();
    return SMP_ERR_GUARD_EXCEEDED;
  } catch (const smpriv::InvalidInput& e) {
    last_error = e.what();
    return SMP_ERR_INVALID_DATA;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SMP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SMP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return SMP_ERR_INTERNAL;
  }
}

template <typename T>
void need(const T* p, const char* what) {
  if (p == nullptr) throw ArgumentError(std::string(what) + " is null");
}

void in_range(std::size_t index, std::size_t size, const char* what) {
  if (index >= size)
    throw ArgumentError(std::string(what) + " " + std::to_string(index) + " out of range [0, " +
                        std::to_string(size) + ")");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Big>
char* decimal(const Big& n) {
  return dup(n.str());
}

smpriv::SolverGuards guards_of(const smp_guards* g) {
  smpriv::SolverGuards out;
  if (g) {
    out.memory_bytes = g->memory_bytes;
    out.time = std::chrono::milliseconds(static_cast<std::int64_t>(g->time_ms));
  }
  return out;
}

smpriv::DistributionSpec spec_of(const smp_distribution& d) {
  switch (d.family) {
    case SMP_FAMILY_EXPONENTIAL:
      return smpriv::DistributionSpec::exponential(d.mean);
    case SMP_FAMILY_NORMAL:
      return smpriv::DistributionSpec::normal(d.mean, d.sd);
  }
  throw ArgumentError("unknown distribution family");
}

smp_distribution spec_to_c(const smpriv::DistributionSpec& s) {
  return {s.family == smpriv::Family::Exponential ? SMP_FAMILY_EXPONENTIAL : SMP_FAMILY_NORMAL,
          s.mean, s.sd};
}

smpriv::TableFormat format_of(smp_format f) {
  return f == SMP_FORMAT_CSV ? smpriv::TableFormat::Csv : smpriv::TableFormat::Markdown;
}

}  // namespace

extern "C" {

const char* smp_version(void) { return "0.1.0"; }

const char* smp_status_name(smp_status status) {
  switch (status) {
    case SMP_OK: return "ok";
    case SMP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SMP_ERR_PARSE: return "parse error";
    case SMP_ERR_INVALID_DATA: return "invalid data";
    case SMP_ERR_NO_SOLUTIONS: return "no solutions";
    case SMP_ERR_GUARD_EXCEEDED: return "guard exceeded";
    case SMP_ERR_INCOMPLETE: return "incomplete search";
    case SMP_ERR_IO: return "i/o error";
    case SMP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* smp_last_error(void) { return last_error.c_str(); }

void smp_string_free(char* s) { std::free(s); }

smp_guards smp_default_guards(void) {
  const smpriv::SolverGuards g;
  return {g.memory_bytes, static_cast<std::uint64_t>(g.time.count())};
}

// ---- readings

smp_status smp_matrix_create(size_t meters, size_t periods, const int64_t* row_major,
                             smp_matrix** out) {
  return guarded([&] {
    need(row_major, "row_major");
    need(out, "out");
    std::vector<smpriv::Wh> cells(row_major, row_major + meters * periods);
    *out = new smp_matrix{smpriv::ReadingMatrix(meters, periods, std::move(cells))};
  });
}

smp_status smp_matrix_parse_csv(const char* text, smp_matrix** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new smp_matrix{smpriv::parse_readings(text)};
  });
}

smp_status smp_matrix_write_csv(const smp_matrix* m, char** out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    *out = dup(smpriv::write_readings_csv(m->value));
  });
}

smp_status smp_matrix_sample(size_t meters, size_t periods, smp_distribution target,
                             smp_distribution others, uint64_t seed, smp_matrix** out) {
  return guarded([&] {
    need(out, "out");
    *out = new smp_matrix{
        smpriv::sample_reading_matrix(meters, periods, spec_of(target), spec_of(others), seed)};
  });
}

smp_status smp_matrix_select(const smp_matrix* m, size_t meters, size_t periods, uint64_t seed,
                             smp_matrix** out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    *out = new smp_matrix{smpriv::select_submatrix(m->value, meters, periods, seed)};
  });
}

size_t smp_matrix_meters(const smp_matrix* m) { return m ? m->value.meters() : 0; }
size_t smp_matrix_periods(const smp_matrix* m) { return m ? m->value.periods() : 0; }

smp_status smp_matrix_reading(const smp_matrix* m, size_t meter, size_t period, int64_t* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    in_range(meter, m->value.meters(), "meter");
    in_range(period, m->value.periods(), "period");
    *out = m->value.at(meter, period);
  });
}

smp_status smp_matrix_total(const smp_matrix* m, size_t meter, int64_t* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    in_range(meter, m->value.meters(), "meter");
    int64_t sum = 0;
    for (auto v : m->value.row(meter)) sum += v;
    *out = sum;
  });
}

void smp_matrix_free(smp_matrix* m) { delete m; }

// ---- instances

smp_status smp_anonymize(const smp_matrix* m, uint64_t seed, smp_instance** inst,
                         smp_permutations** perms) {
  return guarded([&] {
    need(m, "matrix");
    need(inst, "inst");
    auto [instance, record] = smpriv::anonymize(smpriv::build_ground_truth(m->value), seed);
    auto made = std::make_unique<smp_instance>(smp_instance{std::move(instance)});
    if (perms) *perms = new smp_permutations{std::move(record)};
    *inst = made.release();
  });
}

smp_status smp_instance_create(size_t meters, size_t periods, const int64_t* values,
                               const int64_t* totals, smp_instance** out) {
  return guarded([&] {
    need(totals, "totals");
    need(out, "out");
    if (periods > 0) need(values, "values");
    std::vector<std::vector<smpriv::Wh>> rows(periods);
    for (size_t j = 0; j < periods; ++j) rows[j].assign(values + j * meters, values + (j + 1) * meters);
    *out = new smp_instance{
        smpriv::AnonymizedInstance(std::move(rows), std::vector<smpriv::Wh>(totals, totals + meters))};
  });
}

smp_status smp_instance_parse(const char* text, smp_instance** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new smp_instance{smpriv::parse_instance(text)};
  });
}

smp_status smp_instance_write(const smp_instance* inst, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = dup(smpriv::write_instance(inst->value));
  });
}

smp_status smp_instance_example(smp_instance** out) {
  return guarded([&] {
    need(out, "out");
    *out = new smp_instance{smpriv::example_instance()};
  });
}

size_t smp_instance_meters(const smp_instance* inst) { return inst ? inst->value.meters() : 0; }
size_t smp_instance_periods(const smp_instance* inst) { return inst ? inst->value.periods() : 0; }

smp_status smp_instance_value(const smp_instance* inst, size_t period, size_t position,
                              int64_t* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    in_range(period, inst->value.periods(), "period");
    in_range(position, inst->value.meters(), "position");
    *out = inst->value.value(period, position);
  });
}

smp_status smp_instance_total(const smp_instance* inst, size_t meter, int64_t* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    in_range(meter, inst->value.meters(), "meter");
    *out = inst->value.total(meter);
  });
}

void smp_instance_free(smp_instance* inst) { delete inst; }

smp_status smp_permutations_position(const smp_permutations* p, size_t period, size_t meter,
                                     size_t* out) {
  return guarded([&] {
    need(p, "permutations");
    need(out, "out");
    in_range(period, p->value.periods(), "period");
    in_range(meter, p->value.meters(), "meter");
    *out = p->value.position(period, meter);
  });
}

smp_status smp_permutations_write(const smp_permutations* p, char** out) {
  return guarded([&] {
    need(p, "permutations");
    need(out, "out");
    *out = dup(smpriv::write_permutations(p->value));
  });
}

void smp_permutations_free(smp_permutations* p) { delete p; }

// ---- relaxed attack

smp_status smp_count_solutions(const smp_instance* inst, int64_t target_total,
                               const smp_guards* guards, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = decimal(smpriv::forward_counts(inst->value, target_total, guards_of(guards)).solutions());
  });
}

smp_status smp_marginals_compute(const smp_instance* inst, size_t target_meter,
                                 const smp_guards* guards, smp_marginals** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    in_range(target_meter, inst->value.meters(), "target_meter");
    *out = new smp_marginals{inst->value,
                             smpriv::marginal_counts(inst->value, target_meter, guards_of(guards))};
  });
}

smp_status smp_marginals_total(const smp_marginals* mc, char** out) {
  return guarded([&] {
    need(mc, "marginals");
    need(out, "out");
    *out = decimal(mc->counts.total_solutions);
  });
}

smp_status smp_marginals_count(const smp_marginals* mc, size_t period, size_t position,
                               char** out) {
  return guarded([&] {
    need(mc, "marginals");
    need(out, "out");
    in_range(period, mc->instance.periods(), "period");
    in_range(position, mc->instance.meters(), "position");
    *out = decimal(mc->counts.counts[period][position]);
  });
}

smp_status smp_marginals_probability(const smp_marginals* mc, size_t period, size_t position,
                                     double* out) {
  return guarded([&] {
    need(mc, "marginals");
    need(out, "out");
    in_range(period, mc->instance.periods(), "period");
    in_range(position, mc->instance.meters(), "position");
    *out = static_cast<double>(smpriv::Real(mc->counts.counts[period][position]) /
                               smpriv::Real(mc->counts.total_solutions));
  });
}

void smp_marginals_free(smp_marginals* mc) { delete mc; }

smp_status smp_report_compute(const smp_marginals* mc, smp_report** out) {
  return guarded([&] {
    need(mc, "marginals");
    need(out, "out");
    auto source = std::make_shared<const smp_marginals>(*mc);
    auto report = smpriv::entropy_report(source->counts);
    *out = new smp_report{std::move(source), std::move(report)};
  });
}

size_t smp_report_periods(const smp_report* r) { return r ? r->value.period_entropies.size() : 0; }

smp_status smp_report_period_entropy(const smp_report* r, size_t period, double* out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    in_range(period, r->value.period_entropies.size(), "period");
    *out = r->value.period_entropies[period];
  });
}

double smp_report_average(const smp_report* r) { return r ? r->value.average : 0.0; }
double smp_report_max_entropy(const smp_report* r) { return r ? r->value.max_entropy : 0.0; }

smp_status smp_report_render(const smp_report* r, smp_format format, double reveal_threshold,
                             char** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = dup(smpriv::render_entropy_report(r->source->instance, r->source->counts, r->value,
                                             format_of(format), reveal_threshold));
  });
}

void smp_report_free(smp_report* r) { delete r; }

smp_status smp_enumerate(const smp_instance* inst, size_t target_meter, size_t limit,
                         const smp_guards* guards, size_t* positions, size_t* emitted,
                         int* truncated) {
  return guarded([&] {
    need(inst, "instance");
    const auto en = smpriv::enumerate_solutions(inst->value, target_meter, limit, guards_of(guards));
    if (positions) {
      size_t k = 0;
      for (const auto& sel : en.selections)
        for (size_t p : sel) positions[k++] = p;
    }
    if (emitted) *emitted = en.selections.size();
    if (truncated) *truncated = en.truncated ? 1 : 0;
  });
}

smp_status smp_enumerate_render(const smp_instance* inst, size_t target_meter, size_t limit,
                                const smp_guards* guards, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = dup(smpriv::render_enumeration(
        inst->value,
        smpriv::enumerate_solutions(inst->value, target_meter, limit, guards_of(guards))));
  });
}

// ---- joint attack

smp_status smp_joint_solve(const smp_instance* inst, uint64_t work_limit, smp_joint** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    auto j = std::make_unique<smp_joint>(smp_joint{smpriv::solve_joint(inst->value, work_limit ? work_limit : smpriv::kDefaultJointWorkLimit), {}});
    if (j->value.exhausted && !j->value.solutions.empty())
      j->agreed = smpriv::agreed_assignments(j->value);
    *out = j.release();
  });
}

size_t smp_joint_count(const smp_joint* j) { return j ? j->value.solutions.size() : 0; }
int smp_joint_exhausted(const smp_joint* j) { return j && j->value.exhausted ? 1 : 0; }

smp_status smp_joint_raw_count(const smp_joint* j, char** out) {
  return guarded([&] {
    need(j, "joint");
    need(out, "out");
    *out = decimal(j->value.raw_permutations);
  });
}

smp_status smp_joint_value(const smp_joint* j, size_t solution, size_t meter, size_t period,
                           int64_t* out) {
  return guarded([&] {
    need(j, "joint");
    need(out, "out");
    in_range(solution, j->value.solutions.size(), "solution");
    in_range(meter, j->value.instance.meters(), "meter");
    in_range(period, j->value.instance.periods(), "period");
    *out = j->value.instance.value(period, j->value.solutions[solution].position(period, meter));
  });
}

smp_status smp_joint_agreed(const smp_joint* j, size_t meter, size_t period, int* agreed,
                            int64_t* value) {
  if (j && !j->value.exhausted) {
    last_error = "joint search stopped at its work limit";
    return SMP_ERR_INCOMPLETE;
  }
  return guarded([&] {
    need(j, "joint");
    need(agreed, "agreed");
    in_range(meter, j->value.instance.meters(), "meter");
    in_range(period, j->value.instance.periods(), "period");
    if (!j->agreed) throw smpriv::NoSolutions("the joint problem has no solutions");
    *agreed = 0;
    for (const auto& a : *j->agreed)
      if (a.meter == meter && a.period == period) {
        *agreed = 1;
        if (value) *value = a.value;
      }
  });
}

smp_status smp_joint_render(const smp_joint* j, char** out) {
  return guarded([&] {
    need(j, "joint");
    need(out, "out");
    *out = dup(smpriv::render_joint(j->value));
  });
}

void smp_joint_free(smp_joint* j) { delete j; }

// ---- fitting

smp_status smp_cvm(const double* samples, size_t count, smp_distribution spec, double* out) {
  return guarded([&] {
    need(samples, "samples");
    need(out, "out");
    *out = smpriv::cvm_statistic({samples, count}, spec_of(spec));
  });
}

smp_status smp_fit_rank(const double* samples, size_t count, smp_fit* fits, size_t* fit_count) {
  return guarded([&] {
    need(samples, "samples");
    need(fits, "fits");
    const auto ranked = smpriv::rank_distributions({samples, count});
    for (size_t k = 0; k < ranked.size(); ++k) fits[k] = {spec_to_c(ranked[k].spec), ranked[k].cvm};
    if (fit_count) *fit_count = ranked.size();
  });
}

smp_status smp_fit_render(const double* samples, size_t count, smp_format format, char** out) {
  return guarded([&] {
    need(samples, "samples");
    need(out, "out");
    const std::span<const double> xs(samples, count);
    const auto ranked = smpriv::rank_distributions(xs);
    *out = dup(smpriv::render_fits(ranked, xs, format_of(format)));
  });
}

// ---- experiments

smp_status smp_config_create(smp_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new smp_config{};
  });
}

smp_status smp_config_parse(smp_config* c, const char* text) {
  return guarded([&] {
    need(c, "config");
    need(text, "text");
    c->value = smpriv::parse_config(text, c->value);
  });
}

smp_status smp_config_set(smp_config* c, const char* key, const char* value) {
  return guarded([&] {
    need(c, "config");
    need(key, "key");
    need(value, "value");
    smpriv::apply_setting(c->value, key, value);
  });
}

smp_format smp_config_format(const smp_config* c) {
  return c && c->value.format == smpriv::TableFormat::Csv ? SMP_FORMAT_CSV : SMP_FORMAT_MARKDOWN;
}

smp_status smp_config_validate(const smp_config* c) {
  return guarded([&] {
    need(c, "config");
    c->value.validate();
  });
}

smp_status smp_parse_bytes(const char* text, uint64_t* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    smpriv::ExperimentConfig scratch;
    smpriv::apply_setting(scratch, "mem_budget", text);
    *out = scratch.mem_budget;
  });
}

void smp_config_free(smp_config* c) { delete c; }

smp_status smp_experiment_run(const smp_config* c, smp_table** out) {
  return guarded([&] {
    need(c, "config");
    need(out, "out");
    *out = new smp_table{smpriv::run_experiment(c->value)};
  });
}

smp_status smp_table_emit(const smp_table* t, smp_format format, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    *out = dup(smpriv::emit_table(t->value, format_of(format)));
  });
}

smp_status smp_table_emit_repetitions(const smp_table* t, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    *out = dup(smpriv::emit_repetitions(t->value));
  });
}

int smp_table_infeasible(const smp_table* t) { return t && t->value.any_infeasible() ? 1 : 0; }

smp_status smp_table_cell(const smp_table* t, size_t periods, size_t meters, double* mean,
                          double* stddev, size_t* completed, int* infeasible) {
  return guarded([&] {
    need(t, "table");
    const auto* cell = [&]() -> const smpriv::ExperimentCell* {
      for (const auto& c : t->value.cells)
        if (c.t == periods && c.n == meters) return &c;
      return nullptr;
    }();
    if (!cell) throw ArgumentError("no such cell");
    if (mean) *mean = cell->mean;
    if (stddev) *stddev = cell->stddev;
    if (completed) *completed = cell->completed;
    if (infeasible) *infeasible = cell->infeasible ? 1 : 0;
  });
}

void smp_table_free(smp_table* t) { delete t; }

smp_status smp_example_report(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(smpriv::reproduce_example());
  });
}

}  // extern "C"
