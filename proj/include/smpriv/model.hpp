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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace smpriv {

/// Energy in watt-hours. Readings are exact non-negative integers.
using Wh = std::int64_t;

/// Ground-truth readings, one row per meter and one column per period.
/// Indices are 0-based internally; reports print them 1-based.
class ReadingMatrix {
 public:
  /// `row_major` holds meters * periods readings. Throws InvalidInput on a
  /// size mismatch, an empty dimension, or a negative reading.
  ReadingMatrix(std::size_t meters, std::size_t periods, std::vector<Wh> row_major);

  static ReadingMatrix from_rows(const std::vector<std::vector<Wh>>& rows);

  std::size_t meters() const noexcept { return meters_; }
  std::size_t periods() const noexcept { return periods_; }

  Wh at(std::size_t meter, std::size_t period) const {
    return cells_[meter * periods_ + period];
  }
  std::span<const Wh> row(std::size_t meter) const {
    return {cells_.data() + meter * periods_, periods_};
  }
  std::span<const Wh> cells() const noexcept { return cells_; }

  friend bool operator==(const ReadingMatrix&, const ReadingMatrix&) = default;

 private:
  std::size_t meters_;
  std::size_t periods_;
  std::vector<Wh> cells_;
};

/// Readings together with the per-meter billing totals they imply.
struct GroundTruth {
  ReadingMatrix matrix;
  std::vector<Wh> totals;
};

GroundTruth build_ground_truth(const ReadingMatrix& matrix);

/// What the supplier sees: per-period readings in an order unrelated to
/// meter identity, plus each meter's billing total.
///
/// The period count may be zero (empty billing period); the meter count
/// may not. The constructor checks arity, non-negativity and that the
/// readings and totals carry the same energy.
class AnonymizedInstance {
 public:
  AnonymizedInstance(std::vector<std::vector<Wh>> periods, std::vector<Wh> totals);

  std::size_t meters() const noexcept { return totals_.size(); }
  std::size_t periods() const noexcept { return periods_.size(); }

  std::span<const Wh> period(std::size_t j) const { return periods_[j]; }
  Wh value(std::size_t period, std::size_t position) const {
    return periods_[period][position];
  }
  std::span<const Wh> totals() const noexcept { return totals_; }
  Wh total(std::size_t meter) const { return totals_[meter]; }

  friend bool operator==(const AnonymizedInstance&, const AnonymizedInstance&) = default;

 private:
  std::vector<std::vector<Wh>> periods_;
  std::vector<Wh> totals_;
};

/// The secret shuffles: `position(j, i)` is where meter i's period-j reading
/// landed in the published list.
class PermutationRecord {
 public:
  /// Each inner vector maps meter -> position and must be a bijection.
  explicit PermutationRecord(std::vector<std::vector<std::size_t>> perms);

  std::size_t periods() const noexcept { return perms_.size(); }
  std::size_t meters() const noexcept { return perms_.empty() ? 0 : perms_.front().size(); }
  std::size_t position(std::size_t period, std::size_t meter) const {
    return perms_[period][meter];
  }
  std::span<const std::size_t> period(std::size_t j) const { return perms_[j]; }

  friend bool operator==(const PermutationRecord&, const PermutationRecord&) = default;

 private:
  std::vector<std::vector<std::size_t>> perms_;
};

/// Shuffles every period independently with a Fisher-Yates pass driven by
/// Rng(seed). Periods are processed in order; within a period, for
/// k = n-1 down to 1 the slot k is swapped with slot Rng::below(k + 1).
std::pair<AnonymizedInstance, PermutationRecord> anonymize(const GroundTruth& gt,
                                                           std::uint64_t seed);

/// Inverse of anonymize: reads each meter's value back through the record.
ReadingMatrix deanonymize(const AnonymizedInstance& inst, const PermutationRecord& record);

}  // namespace smpriv
