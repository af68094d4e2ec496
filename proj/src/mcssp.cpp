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

#include "smpriv/mcssp.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "smpriv/errors.hpp"

namespace smpriv {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds budget) : end_(Clock::now() + budget) {}

  void check() const {
    if (Clock::now() > end_) throw GuardExceeded("time budget exhausted during counting");
  }

 private:
  Clock::time_point end_;
};

struct ValueGroup {
  Wh value;
  unsigned multiplicity;
};

// Distinct values of one period, ascending, with their multiplicities.
std::vector<ValueGroup> group_values(std::span<const Wh> values) {
  std::vector<Wh> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<ValueGroup> groups;
  for (Wh v : sorted) {
    if (!groups.empty() && groups.back().value == v)
      ++groups.back().multiplicity;
    else
      groups.push_back({v, 1});
  }
  return groups;
}

// Running min/max sums along a visiting order of the periods. done_*[k]
// covers the first k visited periods, rest_*[k] the remaining ones.
struct Envelope {
  std::vector<Wh> done_min, done_max, rest_min, rest_max;
};

Envelope envelope(const AnonymizedInstance& inst, const std::vector<std::size_t>& order) {
  const std::size_t t = order.size();
  Envelope e;
  e.done_min.assign(t + 1, 0);
  e.done_max.assign(t + 1, 0);
  e.rest_min.assign(t + 1, 0);
  e.rest_max.assign(t + 1, 0);
  for (std::size_t k = 0; k < t; ++k) {
    auto p = inst.period(order[k]);
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    e.done_min[k + 1] = e.done_min[k] + *lo;
    e.done_max[k + 1] = e.done_max[k] + *hi;
  }
  for (std::size_t k = 0; k <= t; ++k) {
    e.rest_min[k] = e.done_min[t] - e.done_min[k];
    e.rest_max[k] = e.done_max[t] - e.done_max[k];
  }
  return e;
}

// Key range a stage may hold: reachable from the visited periods and still
// able to land on target through the rest. Empty when lo > hi.
std::pair<Wh, Wh> stage_range(const Envelope& e, std::size_t k, Wh target) {
  const Wh lo = std::max({Wh{0}, target - e.rest_max[k], e.done_min[k]});
  const Wh hi = std::min(target - e.rest_min[k], e.done_max[k]);
  return {lo, hi};
}

std::vector<std::size_t> visiting_order(std::size_t t, CountTable::Direction dir) {
  std::vector<std::size_t> order(t);
  for (std::size_t k = 0; k < t; ++k)
    order[k] = dir == CountTable::Direction::Forward ? k : t - 1 - k;
  return order;
}

// Stages in visiting order: result[k] holds sums over the first k visited periods.
std::vector<CountTable::Stage> build_stages(const AnonymizedInstance& inst, Wh target,
                                            const std::vector<std::size_t>& order,
                                            const Deadline& deadline) {
  const std::size_t t = order.size();
  const Envelope env = envelope(inst, order);
  std::vector<CountTable::Stage> stages(t + 1);
  stages[0].sums.push_back(0);
  stages[0].counts.emplace_back(1);

  std::vector<Count> dense;
  for (std::size_t k = 1; k <= t; ++k) {
    deadline.check();
    const CountTable::Stage& prev = stages[k - 1];
    const auto [lo, hi] = stage_range(env, k, target);
    if (prev.size() == 0 || lo > hi) continue;

    dense.assign(static_cast<std::size_t>(hi - lo + 1), Count(0));
    const auto groups = group_values(inst.period(order[k - 1]));
    for (std::size_t e = 0; e < prev.size(); ++e) {
      const Wh s = prev.sums[e];
      const Count& c = prev.counts[e];
      for (const ValueGroup& g : groups) {
        const Wh key = s + g.value;
        if (key < lo) continue;
        if (key > hi) break;
        if (g.multiplicity == 1)
          dense[key - lo] += c;
        else
          dense[key - lo] += c * g.multiplicity;
      }
      if ((e & 0xfff) == 0xfff) deadline.check();
    }

    CountTable::Stage& cur = stages[k];
    for (std::size_t d = 0; d < dense.size(); ++d) {
      if (dense[d].is_zero()) continue;
      cur.sums.push_back(lo + static_cast<Wh>(d));
      cur.counts.push_back(std::move(dense[d]));
    }
  }
  return stages;
}

CountTable make_table(const AnonymizedInstance& inst, Wh target, CountTable::Direction dir,
                      const Deadline& deadline) {
  if (target < 0) throw InvalidInput("target total must be non-negative");
  auto stages = build_stages(inst, target, visiting_order(inst.periods(), dir), deadline);
  if (dir == CountTable::Direction::Backward) std::reverse(stages.begin(), stages.end());
  return CountTable(dir, target, std::move(stages));
}

void check_meter(const AnonymizedInstance& inst, std::size_t meter) {
  if (meter >= inst.meters())
    throw InvalidInput("target meter " + std::to_string(meter + 1) + " out of range 1.." +
                       std::to_string(inst.meters()));
}

void check_memory(const AnonymizedInstance& inst, Wh target, const SolverGuards& guards) {
  const std::uint64_t need = estimate_table_bytes(inst, target);
  if (need > guards.memory_bytes)
    throw GuardExceeded("count tables need about " + std::to_string(need >> 20) +
                        " MiB, budget is " + std::to_string(guards.memory_bytes >> 20) + " MiB");
}

std::pair<CountTable, CountTable> both_tables(const AnonymizedInstance& inst, Wh target,
                                              const SolverGuards& guards) {
  check_memory(inst, target, guards);
  const Deadline deadline(guards.time);
  if (guards.concurrent_passes) {
    auto backward = std::async(std::launch::async, [&] {
      return make_table(inst, target, CountTable::Direction::Backward, deadline);
    });
    CountTable forward = make_table(inst, target, CountTable::Direction::Forward, deadline);
    return {std::move(forward), backward.get()};
  }
  CountTable forward = make_table(inst, target, CountTable::Direction::Forward, deadline);
  CountTable backward = make_table(inst, target, CountTable::Direction::Backward, deadline);
  return {std::move(forward), std::move(backward)};
}

}  // namespace

Count CountTable::Stage::at(Wh sum) const {
  auto it = std::lower_bound(sums.begin(), sums.end(), sum);
  if (it == sums.end() || *it != sum) return Count(0);
  return counts[static_cast<std::size_t>(it - sums.begin())];
}

bool CountTable::Stage::contains(Wh sum) const {
  return std::binary_search(sums.begin(), sums.end(), sum);
}

CountTable forward_counts(const AnonymizedInstance& inst, Wh target, const SolverGuards& guards) {
  check_memory(inst, target, guards);
  return make_table(inst, target, CountTable::Direction::Forward, Deadline(guards.time));
}

CountTable backward_counts(const AnonymizedInstance& inst, Wh target, const SolverGuards& guards) {
  check_memory(inst, target, guards);
  return make_table(inst, target, CountTable::Direction::Backward, Deadline(guards.time));
}

std::uint64_t estimate_table_bytes(const AnonymizedInstance& inst, Wh target) {
  if (target < 0) return 0;
  const std::size_t t = inst.periods();
  // Counts are bounded by n^t; limbs beyond cpp_int's inline storage live on the heap.
  const double bits = static_cast<double>(t) * std::log2(std::max<double>(2.0, inst.meters())) + 1;
  const std::uint64_t limb_bytes = bits > 128 ? (static_cast<std::uint64_t>(bits) / 64 + 1) * 8 + 16 : 0;
  const std::uint64_t per_entry = sizeof(Wh) + sizeof(Count) + limb_bytes;

  std::uint64_t entries = 0;
  Wh widest = 0;
  for (auto dir : {CountTable::Direction::Forward, CountTable::Direction::Backward}) {
    const Envelope env = envelope(inst, visiting_order(t, dir));
    for (std::size_t k = 0; k <= t; ++k) {
      const auto [lo, hi] = stage_range(env, k, target);
      if (lo <= hi) {
        entries += static_cast<std::uint64_t>(hi - lo + 1);
        widest = std::max(widest, hi - lo + 1);
      }
    }
  }
  return (entries + static_cast<std::uint64_t>(widest)) * per_entry;
}

MarginalCounts marginal_counts(const AnonymizedInstance& inst, std::size_t target_meter,
                               const SolverGuards& guards) {
  check_meter(inst, target_meter);
  const Wh target = inst.total(target_meter);
  const auto [forward, backward] = both_tables(inst, target, guards);
  const Deadline deadline(guards.time);

  MarginalCounts mc;
  mc.target_meter = target_meter;
  mc.target_total = target;
  mc.total_solutions = forward.solutions();
  if (mc.total_solutions.is_zero())
    throw NoSolutions("no selection reaches meter " + std::to_string(target_meter + 1) +
                      "'s total of " + std::to_string(target) + " Wh");

  const std::size_t t = inst.periods(), n = inst.meters();
  mc.counts.assign(t, std::vector<Count>(n));
  for (std::size_t j = 0; j < t; ++j) {
    deadline.check();
    // Sums over periods before j, and over periods after j.
    const CountTable::Stage& before = forward.stage(j);
    const CountTable::Stage& after = backward.stage(j + 2);
    for (const ValueGroup& g : group_values(inst.period(j))) {
      Count acc = 0;
      // before.sums ascends while the matching key in `after` descends.
      std::ptrdiff_t b = static_cast<std::ptrdiff_t>(after.size()) - 1;
      for (std::size_t f = 0; f < before.size() && b >= 0; ++f) {
        const Wh need = target - g.value - before.sums[f];
        if (need < 0) break;
        while (b >= 0 && after.sums[static_cast<std::size_t>(b)] > need) --b;
        if (b >= 0 && after.sums[static_cast<std::size_t>(b)] == need)
          acc += before.counts[f] * after.counts[static_cast<std::size_t>(b)];
      }
      for (std::size_t k = 0; k < n; ++k)
        if (inst.value(j, k) == g.value) mc.counts[j][k] = acc;
    }
  }
  return mc;
}

Enumeration enumerate_solutions(const AnonymizedInstance& inst, std::size_t target_meter,
                                std::size_t limit, const SolverGuards& guards) {
  check_meter(inst, target_meter);
  if (limit == 0) throw InvalidInput("enumeration limit must be at least 1");
  const Wh target = inst.total(target_meter);
  const CountTable backward = backward_counts(inst, target, guards);
  const Deadline deadline(guards.time);

  Enumeration out;
  out.total_solutions = backward.solutions();
  out.truncated = out.total_solutions > limit;
  if (out.total_solutions.is_zero()) return out;

  const std::size_t t = inst.periods(), n = inst.meters();
  Selection current(t, 0);
  // Iterative depth-first walk; sums[j] is the partial sum before period j.
  std::vector<Wh> sums(t + 1, 0);
  std::vector<std::size_t> next(t + 1, 0);
  std::size_t j = 0;
  std::uint64_t steps = 0;
  while (true) {
    if (j == t) {
      out.selections.push_back(current);
      if (out.selections.size() == limit) break;
      if (j == 0) break;
      --j;
      continue;
    }
    bool advanced = false;
    while (next[j] < n) {
      const std::size_t k = next[j]++;
      const Wh rest = target - sums[j] - inst.value(j, k);
      if (rest < 0 || !backward.stage(j + 2).contains(rest)) continue;
      current[j] = k;
      sums[j + 1] = sums[j] + inst.value(j, k);
      ++j;
      next[j] = 0;
      advanced = true;
      break;
    }
    if ((++steps & 0xffff) == 0) deadline.check();
    if (advanced) continue;
    if (j == 0) break;
    --j;
  }
  return out;
}

}  // namespace smpriv
