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

#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "smpriv/errors.hpp"
#include "smpriv/example.hpp"
#include "smpriv/ingest.hpp"

using namespace smpriv;

namespace {

std::string example_csv() {
  const auto m = example_ground_truth();
  std::string text = "meter_id,period,wh\n";
  const char* ids[] = {"house-a", "house-b", "house-c"};
  // Period-major order, periods numbered from 100.
  for (std::size_t j = 0; j < 9; ++j)
    for (std::size_t i = 0; i < 3; ++i)
      text += std::string(ids[i]) + "," + std::to_string(100 + j) + "," + std::to_string(m.at(i, j)) + "\n";
  return text;
}

}  // namespace

TEST_CASE("readings csv") {
  const auto m = parse_readings_csv(example_csv());
  CHECK(m == example_ground_truth());
  CHECK(build_ground_truth(m).totals == std::vector<Wh>{991, 473, 926});
  CHECK(parse_readings(example_csv()) == m);

  const auto one = parse_readings_csv("meter_id,period,wh\nx,7,12\n");
  CHECK(one.meters() == 1);
  CHECK(one.periods() == 1);
  CHECK(one.at(0, 0) == 12);

  // Periods sort numerically, meters keep first-appearance order.
  const auto order = parse_readings_csv("meter_id,period,wh\nb,10,1\na,9,2\nb,9,3\na,10,4\n");
  CHECK(order == ReadingMatrix::from_rows({{3, 1}, {2, 4}}));

  CHECK(parse_readings(write_readings_csv(m)) == m);
}

TEST_CASE("readings csv errors") {
  CHECK_THROWS_WITH_AS(parse_readings_csv("meter_id,period,wh\na,1,5\na,1,6\n"),
                       doctest::Contains("duplicate reading for meter 'a', period 1"), ParseError);
  CHECK_THROWS_WITH_AS(parse_readings_csv("meter_id,period,wh\na,1,5\nb,2,6\n"),
                       doctest::Contains("missing reading"), ParseError);
  CHECK_THROWS_WITH_AS(parse_readings_csv("meter_id,period,wh\na,1\n"),
                       doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(parse_readings_csv("meter_id,period,wh\na,1,-5\n"), ParseError);
  CHECK_THROWS_AS(parse_readings_csv("meter_id,period,wh\na,1,0.5\n"), ParseError);
  CHECK_THROWS_AS(parse_readings_csv("id,period,wh\na,1,5\n"), ParseError);
  CHECK_THROWS_AS(parse_readings_csv("meter_id,period,wh\n"), ParseError);
  CHECK_THROWS_AS(parse_readings("meter_id,period,joules\na,1,5\n"), ParseError);
  try {
    parse_readings_csv("meter_id,period,wh\na,1,5\na,x,6\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("kwh readings") {
  CHECK(kwh_to_wh("0.362") == 362);
  CHECK(kwh_to_wh("0.000") == 0);
  CHECK(kwh_to_wh("12") == 12000);
  CHECK(kwh_to_wh(".5") == 500);
  CHECK(kwh_to_wh("1.05") == 1050);
  CHECK(kwh_to_wh("4.") == 4000);
  CHECK_THROWS_AS(kwh_to_wh("1.2345"), InvalidInput);
  CHECK_THROWS_AS(kwh_to_wh("-0.5"), InvalidInput);
  CHECK_THROWS_AS(kwh_to_wh("+0.5"), InvalidInput);
  CHECK_THROWS_AS(kwh_to_wh("1e3"), InvalidInput);
  CHECK_THROWS_AS(kwh_to_wh(""), InvalidInput);
  CHECK_THROWS_AS(kwh_to_wh("."), InvalidInput);
  CHECK_THROWS_AS(kwh_to_wh("99999999999999999999"), InvalidInput);

  const auto m = parse_kwh_readings("meter_id,period,kwh\nm1,1,0.362\nm1,2,0.064\n");
  CHECK(m == ReadingMatrix::from_rows({{362, 64}}));
  CHECK(parse_readings("meter_id,period,kwh\nm1,1,0.362\n").at(0, 0) == 362);
  CHECK_THROWS_WITH_AS(parse_kwh_readings("meter_id,period,kwh\nm1,1,1.2345\n"),
                       doctest::Contains("more than three decimals"), ParseError);
  CHECK_THROWS_AS(parse_kwh_readings("meter_id,period,wh\nm1,1,3\n"), ParseError);
}

TEST_CASE("kwh conversion matches integer arithmetic") {
  Rng rng(12);
  for (int k = 0; k < 20000; ++k) {
    const std::uint64_t whole = rng.below(1000000);
    const std::size_t decimals = rng.below(4);
    std::uint64_t frac = 0, scale = 1;
    std::string text = std::to_string(whole);
    if (decimals > 0 || rng.below(2)) text += '.';
    for (std::size_t d = 0; d < decimals; ++d) {
      const std::uint64_t digit = rng.below(10);
      text += char('0' + digit);
      frac = frac * 10 + digit;
      scale *= 10;
    }
    const auto expected = static_cast<Wh>(whole * 1000 + frac * (1000 / scale));
    REQUIRE(kwh_to_wh(text) == expected);
  }
}

TEST_CASE("submatrix selection") {
  Rng rng(1);
  const auto source = oracle::random_matrix(rng, 5, 10, 1000);
  CHECK(select_submatrix(source, 5, 10, 99) == source);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto sub = select_submatrix(source, 2, 3, seed);
    CHECK(sub == select_submatrix(source, 2, 3, seed));
    REQUIRE(sub.meters() == 2);
    REQUIRE(sub.periods() == 3);
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < 2; ++r) {
      bool found = false;
      for (std::size_t i = 0; i < 5 && !found; ++i)
        for (std::size_t start = 0; start + 3 <= 10 && !found; ++start) {
          bool same = true;
          for (std::size_t c = 0; c < 3; ++c) same = same && sub.at(r, c) == source.at(i, start + c);
          if (same) {
            found = true;
            rows.push_back(i);
          }
        }
      CHECK(found);
    }
  }
  CHECK_THROWS_AS(select_submatrix(source, 6, 3, 1), InvalidInput);
  CHECK_THROWS_AS(select_submatrix(source, 2, 11, 1), InvalidInput);
}

TEST_CASE("instance text") {
  const auto inst = example_instance();
  const std::string text = write_instance(inst);
  CHECK(text.rfind("meters 3\nperiods 9\ntotals 991 473 926\nperiod 1 117 104 362\n", 0) == 0);
  CHECK(parse_instance(text) == inst);

  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto [random, perms] = oracle::random_instance(rng, 1 + rng.below(6), 1 + rng.below(9), 500);
    CHECK(parse_instance(write_instance(random)) == random);
    CHECK(parse_permutations(write_permutations(perms)) == perms);
  }
  const AnonymizedInstance empty({}, {0, 0});
  CHECK(parse_instance(write_instance(empty)) == empty);

  CHECK_THROWS_AS(parse_instance("meters 2\nperiods 1\ntotals 3\nperiod 1 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("meters 2\nperiods 1\ntotals 1 2\nperiod 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("meters 2\nperiods 2\ntotals 1 2\nperiod 1 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("meter 2\nperiods 1\ntotals 1 2\nperiod 1 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("meters 2\nperiods 1\ntotals 1 2\nperiod 2 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("meters 2\nperiods 1\ntotals 1 9\nperiod 1 1 2\n"), InvalidInput);
}
