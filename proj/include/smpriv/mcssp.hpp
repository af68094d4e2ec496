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
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "smpriv/model.hpp"

namespace smpriv {

/// Exact solution counts. The number of selections grows as n^t, far past
/// 64 bits at realistic sizes.
using Count = boost::multiprecision::cpp_int;

/// Resource limits for one relaxed solve. A run that would exceed either
/// limit throws GuardExceeded instead of exhausting the machine.
struct SolverGuards {
  std::uint64_t memory_bytes = std::uint64_t{4} << 30;
  std::chrono::milliseconds time{std::chrono::minutes(10)};
  /// Run the forward and backward passes on separate threads.
  bool concurrent_passes = false;
};

/// Number of ways to reach each partial sum, one stage per period boundary.
///
/// A forward table's stage k covers the first k periods (k = 0..t); stage 0
/// is {0: 1}. A backward table's stage k covers periods k..t in 1-based
/// terms (k = 1..t+1); stage t+1 is {0: 1}. Every stage holds only keys in
/// [0, target] that can still be completed to exactly target given the
/// other periods' minimum and maximum readings, and never stores a zero
/// count.
class CountTable {
 public:
  enum class Direction { Forward, Backward };

  struct Stage {
    std::vector<Wh> sums;  // ascending
    std::vector<Count> counts;

    std::size_t size() const noexcept { return sums.size(); }
    /// Zero when `sum` is absent.
    Count at(Wh sum) const;
    bool contains(Wh sum) const;
  };

  CountTable(Direction direction, Wh target, std::vector<Stage> stages)
      : direction_(direction), target_(target), stages_(std::move(stages)) {}

  Direction direction() const noexcept { return direction_; }
  Wh target() const noexcept { return target_; }
  std::size_t periods() const noexcept { return stages_.size() - 1; }

  /// Stage by its documented number (see class comment).
  const Stage& stage(std::size_t k) const {
    return stages_[direction_ == Direction::Forward ? k : k - 1];
  }

  /// Total number of selections hitting the target.
  Count solutions() const {
    return direction_ == Direction::Forward ? stages_.back().at(target_)
                                            : stages_.front().at(target_);
  }

 private:
  Direction direction_;
  Wh target_;
  std::vector<Stage> stages_;
};

CountTable forward_counts(const AnonymizedInstance& inst, Wh target,
                          const SolverGuards& guards = {});
CountTable backward_counts(const AnonymizedInstance& inst, Wh target,
                           const SolverGuards& guards = {});

/// Per-(period, position) solution counts for one meter.
struct MarginalCounts {
  std::size_t target_meter = 0;  // 0-based
  Wh target_total = 0;
  Count total_solutions;
  std::vector<std::vector<Count>> counts;  // [period][position]
};

/// counts[j][k] = number of selections hitting the meter's total that pick
/// position k in period j. Throws NoSolutions when there are none, and
/// GuardExceeded when the tables would not fit the guards.
MarginalCounts marginal_counts(const AnonymizedInstance& inst, std::size_t target_meter,
                               const SolverGuards& guards = {});

/// One position per period, 0-based.
using Selection = std::vector<std::size_t>;

struct Enumeration {
  std::vector<Selection> selections;
  Count total_solutions;
  bool truncated = false;
};

/// Every selection summing to the meter's total, in lexicographic order of
/// (period 1 position, period 2 position, ...), stopping after `limit`.
Enumeration enumerate_solutions(const AnonymizedInstance& inst, std::size_t target_meter,
                                std::size_t limit, const SolverGuards& guards = {});

/// Upper estimate of the bytes both count tables need for this target.
std::uint64_t estimate_table_bytes(const AnonymizedInstance& inst, Wh target);

}  // namespace smpriv
