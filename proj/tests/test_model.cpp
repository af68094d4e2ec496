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

#include "doctest.h"
#include "oracles.hpp"
#include "smpriv/errors.hpp"
#include "smpriv/example.hpp"
#include "smpriv/model.hpp"
#include "smpriv/rng.hpp"

using namespace smpriv;

TEST_CASE("ground truth totals are row sums") {
  const auto gt = build_ground_truth(example_ground_truth());
  CHECK(gt.totals == std::vector<Wh>{991, 473, 926});

  CHECK(build_ground_truth(ReadingMatrix::from_rows({{5}})).totals == std::vector<Wh>{5});

  Rng rng(11);
  const auto m = oracle::random_matrix(rng, 4, 6, 500);
  const auto totals = build_ground_truth(m).totals;
  for (std::size_t i = 0; i < 4; ++i) {
    Wh sum = 0;
    for (std::size_t j = 0; j < 6; ++j) sum += m.cells()[i * 6 + j];
    CHECK(totals[i] == sum);
  }
}

TEST_CASE("reading matrix rejects bad shapes and values") {
  CHECK_THROWS_AS(ReadingMatrix(2, 2, {1, 2, 3}), InvalidInput);
  CHECK_THROWS_AS(ReadingMatrix(0, 2, {}), InvalidInput);
  CHECK_THROWS_AS(ReadingMatrix::from_rows({{1, 2}, {3}}), InvalidInput);
  CHECK_THROWS_WITH_AS(ReadingMatrix(1, 2, {4, -1}), "negative reading at meter 1, period 2",
                       InvalidInput);
}

TEST_CASE("instance invariants are enforced") {
  CHECK_NOTHROW(AnonymizedInstance({{1, 2}}, {2, 1}));
  CHECK_THROWS_AS(AnonymizedInstance({{1, 2, 3}}, {3, 3}), InvalidInput);  // arity
  CHECK_THROWS_AS(AnonymizedInstance({{1, 2}}, {2, 2}), InvalidInput);     // energy
  CHECK_THROWS_AS(AnonymizedInstance({{1, -2}}, {1, -2}), InvalidInput);
  CHECK_THROWS_AS(AnonymizedInstance({}, {}), InvalidInput);
  const AnonymizedInstance empty({}, {0, 0});
  CHECK(empty.periods() == 0);
  CHECK(empty.meters() == 2);
}

TEST_CASE("permutation records must be bijections") {
  CHECK_NOTHROW(PermutationRecord({{1, 0, 2}}));
  CHECK_THROWS_AS(PermutationRecord({{0, 0, 2}}), InvalidInput);
  CHECK_THROWS_AS(PermutationRecord({{0, 3, 1}}), InvalidInput);
  CHECK_THROWS_AS(PermutationRecord({{0, 1}, {0}}), InvalidInput);
}

TEST_CASE("anonymize with one meter is the identity") {
  const auto gt = build_ground_truth(ReadingMatrix::from_rows({{4, 0, 9}}));
  const auto [inst, perms] = anonymize(gt, 99);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(inst.value(j, 0) == gt.matrix.at(0, j));
    CHECK(perms.position(j, 0) == 0);
  }
}

TEST_CASE("anonymized example keeps each period's readings") {
  const auto [inst, perms] = anonymize(build_ground_truth(example_ground_truth()), 7);
  const auto published = example_instance();
  for (std::size_t j = 0; j < inst.periods(); ++j) {
    std::vector<Wh> a(inst.period(j).begin(), inst.period(j).end());
    std::vector<Wh> b(published.period(j).begin(), published.period(j).end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  CHECK(std::equal(inst.totals().begin(), inst.totals().end(), published.totals().begin()));
}

TEST_CASE("anonymize round-trips, preserves multisets and is deterministic") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(6), t = 1 + rng.below(10);
    const auto gt = build_ground_truth(oracle::random_matrix(rng, n, t, 300));
    const std::uint64_t seed = rng.next();
    const auto [inst, perms] = anonymize(gt, seed);
    REQUIRE(deanonymize(inst, perms) == gt.matrix);

    Wh published = 0, billed = 0;
    for (std::size_t j = 0; j < t; ++j) {
      std::vector<Wh> column(n), listed(inst.period(j).begin(), inst.period(j).end());
      for (std::size_t i = 0; i < n; ++i) column[i] = gt.matrix.at(i, j);
      std::sort(column.begin(), column.end());
      std::sort(listed.begin(), listed.end());
      CHECK(column == listed);
      for (Wh v : listed) published += v;
    }
    for (Wh e : inst.totals()) billed += e;
    CHECK(published == billed);

    const auto again = anonymize(gt, seed);
    CHECK(again.first == inst);
    CHECK(again.second == perms);
  }
}

TEST_CASE("rng helpers") {
  Rng a(5), b(5);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  Rng r(1);
  for (int k = 0; k < 1000; ++k) {
    CHECK(r.below(7) < 7);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(r.below(1) == 0);
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
}
