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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "smpriv/errors.hpp"
#include "smpriv/example.hpp"
#include "smpriv/mcssp.hpp"

using namespace smpriv;

namespace {

std::size_t position_of(const AnonymizedInstance& inst, std::size_t period, Wh value) {
  const auto p = inst.period(period);
  return static_cast<std::size_t>(std::find(p.begin(), p.end(), value) - p.begin());
}

void check_table_shape(const CountTable& table) {
  const std::size_t t = table.periods();
  const std::size_t base = table.direction() == CountTable::Direction::Forward ? 0 : t + 1;
  const auto& origin = table.stage(base);
  REQUIRE(origin.size() == 1);
  CHECK(origin.sums[0] == 0);
  CHECK(origin.counts[0] == 1);
  const std::size_t first = table.direction() == CountTable::Direction::Forward ? 0 : 1;
  for (std::size_t k = first; k <= first + t; ++k) {
    const auto& s = table.stage(k);
    CHECK(std::is_sorted(s.sums.begin(), s.sums.end()));
    for (std::size_t e = 0; e < s.size(); ++e) {
      CHECK(s.sums[e] >= 0);
      CHECK(s.sums[e] <= table.target());
      CHECK(s.counts[e] > 0);
    }
  }
}

}  // namespace

TEST_CASE("example has 22 relaxed solutions for meter 1") {
  const auto inst = example_instance();
  const auto fwd = forward_counts(inst, 991);
  CHECK(fwd.stage(9).at(991) == 22);
  CHECK(fwd.solutions() == 22);
  const auto bwd = backward_counts(inst, 991);
  CHECK(bwd.stage(1).at(991) == 22);
  check_table_shape(fwd);
  check_table_shape(bwd);
}

TEST_CASE("empty billing period") {
  const AnonymizedInstance inst({}, {0, 0});
  CHECK(forward_counts(inst, 0).solutions() == 1);
  CHECK(forward_counts(inst, 5).solutions() == 0);
  CHECK(backward_counts(inst, 0).solutions() == 1);
  CHECK(backward_counts(inst, 5).solutions() == 0);
  CHECK_THROWS_AS(forward_counts(inst, -1), InvalidInput);
}

TEST_CASE("counts match exhaustive enumeration") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto [inst, perms] = oracle::random_instance(rng, 4, 7, 60);
    // Real totals plus arbitrary, often infeasible, targets.
    std::vector<Wh> targets(inst.totals().begin(), inst.totals().end());
    targets.push_back(static_cast<Wh>(rng.below(500)));
    targets.push_back(0);
    for (Wh target : targets) {
      const auto expected = oracle::relaxed(inst, target).total;
      const auto fwd = forward_counts(inst, target);
      const auto bwd = backward_counts(inst, target);
      CHECK(fwd.stage(7).at(target) == expected);
      CHECK(bwd.stage(1).at(target) == fwd.stage(7).at(target));
      check_table_shape(fwd);
      check_table_shape(bwd);
    }
  }
}

TEST_CASE("example marginal counts") {
  const auto inst = example_instance();
  const auto mc = marginal_counts(inst, 0);
  CHECK(mc.total_solutions == 22);
  CHECK(mc.target_total == 991);
  CHECK(mc.counts[0][position_of(inst, 0, 362)] == 21);
  CHECK(mc.counts[0][position_of(inst, 0, 117)] == 1);
  CHECK(mc.counts[0][position_of(inst, 0, 104)] == 0);
  CHECK(mc.counts[3] == std::vector<Count>{7, 8, 7});  // readings 23, 25, 149

  // Tally the known solutions column by column.
  for (std::size_t j = 0; j < 9; ++j)
    for (std::size_t k = 0; k < 3; ++k) {
      const Wh v = inst.value(j, k);
      const auto tally = std::count_if(fixtures::kExampleRelaxedSolutions.begin(),
                                       fixtures::kExampleRelaxedSolutions.end(),
                                       [&](const auto& row) { return row[j] == v; });
      CHECK(mc.counts[j][k] == tally);
    }
}

TEST_CASE("single meter has one selection") {
  const AnonymizedInstance inst({{3}, {0}, {8}}, {11});
  const auto mc = marginal_counts(inst, 0);
  CHECK(mc.total_solutions == 1);
  for (const auto& row : mc.counts) CHECK(row == std::vector<Count>{1});
}

TEST_CASE("marginal counts error paths") {
  const AnonymizedInstance unreachable({{1, 2}}, {0, 3});
  CHECK_THROWS_AS(marginal_counts(unreachable, 0), NoSolutions);
  CHECK_THROWS_AS(marginal_counts(example_instance(), 3), InvalidInput);
}

TEST_CASE("marginals agree with enumeration whenever n^t <= 1e6") {
  Rng rng(4242);
  int checked = 0;
  while (checked < 120) {
    const std::size_t n = 1 + rng.below(5), t = 1 + rng.below(8);
    if (std::pow(double(n), double(t)) > 1e6) continue;
    const Wh max_value = rng.below(2) ? 200 : 6;  // small ranges force repeats
    const auto [inst, perms] = oracle::random_instance(rng, n, t, max_value);
    const std::size_t meter = rng.below(n);
    const auto expected = oracle::relaxed(inst, inst.total(meter));
    const auto mc = marginal_counts(inst, meter);
    REQUIRE(mc.total_solutions == expected.total);
    for (std::size_t j = 0; j < t; ++j)
      for (std::size_t k = 0; k < n; ++k) CHECK(mc.counts[j][k] == expected.counts[j][k]);
    ++checked;
  }
}

TEST_CASE("row sums, equal-value symmetry and ground-truth membership") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(8), t = 1 + rng.below(12);
    const auto [inst, perms] = oracle::random_instance(rng, n, t, rng.below(2) ? 150 : 4);
    const std::size_t meter = rng.below(n);
    const auto mc = marginal_counts(inst, meter);
    REQUIRE(mc.total_solutions >= 1);
    for (std::size_t j = 0; j < t; ++j) {
      Count sum = 0;
      for (const auto& c : mc.counts[j]) sum += c;
      CHECK(sum == mc.total_solutions);
      CHECK(mc.counts[j][perms.position(j, meter)] >= 1);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (inst.value(j, a) == inst.value(j, b)) CHECK(mc.counts[j][a] == mc.counts[j][b]);
    }
  }
}

TEST_CASE("counts beyond 64 bits stay exact") {
  // Every reading equal: all 32^60 selections hit the total.
  const std::size_t n = 32, t = 60;
  const AnonymizedInstance inst(std::vector<std::vector<Wh>>(t, std::vector<Wh>(n, 1)),
                                std::vector<Wh>(n, static_cast<Wh>(t)));
  const auto mc = marginal_counts(inst, 5);
  const Count expected = boost::multiprecision::pow(Count(32), 60);
  CHECK(mc.total_solutions == expected);
  CHECK(mc.total_solutions == Count(1) << 300);
  CHECK(mc.counts[17][3] == expected / 32);
}

TEST_CASE("concurrent passes give the same marginals") {
  Rng rng(5);
  const auto [inst, perms] = oracle::random_instance(rng, 6, 10, 120);
  SolverGuards g;
  g.concurrent_passes = true;
  const auto a = marginal_counts(inst, 0);
  const auto b = marginal_counts(inst, 0, g);
  CHECK(a.total_solutions == b.total_solutions);
  CHECK(a.counts == b.counts);
}

TEST_CASE("guards stop oversized work") {
  Rng rng(3);
  const auto [inst, perms] = oracle::random_instance(rng, 16, 40, 400);
  SolverGuards tiny_memory;
  tiny_memory.memory_bytes = 1024;
  CHECK_THROWS_AS(marginal_counts(inst, 0, tiny_memory), GuardExceeded);
  CHECK_THROWS_AS(forward_counts(inst, inst.total(0), tiny_memory), GuardExceeded);
  SolverGuards no_time;
  no_time.time = std::chrono::milliseconds(-1);
  CHECK_THROWS_AS(marginal_counts(inst, 0, no_time), GuardExceeded);
  CHECK(estimate_table_bytes(inst, inst.total(0)) > 1024);
}

TEST_CASE("enumeration of the example") {
  const auto inst = example_instance();
  const auto en = enumerate_solutions(inst, 0, 100);
  CHECK_FALSE(en.truncated);
  CHECK(en.total_solutions == 22);
  REQUIRE(en.selections.size() == 22);
  CHECK(std::is_sorted(en.selections.begin(), en.selections.end()));

  std::multiset<std::vector<Wh>> got, want(fixtures::kExampleRelaxedSolutions.begin(),
                                           fixtures::kExampleRelaxedSolutions.end());
  for (const auto& sel : en.selections) {
    std::vector<Wh> values;
    for (std::size_t j = 0; j < sel.size(); ++j) values.push_back(inst.value(j, sel[j]));
    got.insert(values);
  }
  CHECK(got == want);

  const auto cut = enumerate_solutions(inst, 0, 5);
  CHECK(cut.truncated);
  CHECK(cut.selections.size() == 5);
  CHECK(std::equal(cut.selections.begin(), cut.selections.end(), en.selections.begin()));
  CHECK_THROWS_AS(enumerate_solutions(inst, 0, 0), InvalidInput);
}

TEST_CASE("enumeration edge cases and brute-force agreement") {
  const AnonymizedInstance single({{3}, {0}, {8}}, {11});
  const auto one = enumerate_solutions(single, 0, 10);
  REQUIRE(one.selections.size() == 1);
  CHECK(one.selections[0] == Selection{0, 0, 0});

  const AnonymizedInstance unreachable({{1, 2}}, {0, 3});
  const auto none = enumerate_solutions(unreachable, 0, 10);
  CHECK(none.selections.empty());
  CHECK_FALSE(none.truncated);

  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [inst, perms] = oracle::random_instance(rng, 3, 6, trial % 2 ? 40 : 5);
    const std::size_t meter = rng.below(3);
    const auto expected = oracle::relaxed(inst, inst.total(meter));
    const auto en = enumerate_solutions(inst, meter, 1000);
    CHECK(en.selections == expected.selections);
    CHECK(en.total_solutions == en.selections.size());
  }
}
