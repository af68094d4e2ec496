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

#include "smpriv/model.hpp"

#include <numeric>
#include <string>

#include "smpriv/errors.hpp"
#include "smpriv/rng.hpp"

namespace smpriv {

ReadingMatrix::ReadingMatrix(std::size_t meters, std::size_t periods,
                             std::vector<Wh> row_major)
    : meters_(meters), periods_(periods), cells_(std::move(row_major)) {
  if (meters_ == 0 || periods_ == 0)
    throw InvalidInput("reading matrix needs at least one meter and one period");
  if (cells_.size() != meters_ * periods_)
    throw InvalidInput("reading matrix expects " + std::to_string(meters_ * periods_) +
                       " cells, got " + std::to_string(cells_.size()));
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k] < 0)
      throw InvalidInput("negative reading at meter " + std::to_string(k / periods_ + 1) +
                         ", period " + std::to_string(k % periods_ + 1));
  }
}

ReadingMatrix ReadingMatrix::from_rows(const std::vector<std::vector<Wh>>& rows) {
  if (rows.empty()) throw InvalidInput("reading matrix needs at least one meter");
  const std::size_t t = rows.front().size();
  std::vector<Wh> cells;
  cells.reserve(rows.size() * t);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != t)
      throw InvalidInput("row " + std::to_string(i + 1) + " has " +
                         std::to_string(rows[i].size()) + " periods, expected " +
                         std::to_string(t));
    cells.insert(cells.end(), rows[i].begin(), rows[i].end());
  }
  return ReadingMatrix(rows.size(), t, std::move(cells));
}

GroundTruth build_ground_truth(const ReadingMatrix& matrix) {
  std::vector<Wh> totals(matrix.meters());
  for (std::size_t i = 0; i < matrix.meters(); ++i) {
    auto row = matrix.row(i);
    totals[i] = std::accumulate(row.begin(), row.end(), Wh{0});
  }
  return GroundTruth{matrix, std::move(totals)};
}

AnonymizedInstance::AnonymizedInstance(std::vector<std::vector<Wh>> periods,
                                       std::vector<Wh> totals)
    : periods_(std::move(periods)), totals_(std::move(totals)) {
  if (totals_.empty()) throw InvalidInput("instance needs at least one meter");
  Wh energy = 0;
  for (Wh e : totals_) {
    if (e < 0) throw InvalidInput("negative billing total");
    energy += e;
  }
  Wh published = 0;
  for (std::size_t j = 0; j < periods_.size(); ++j) {
    if (periods_[j].size() != totals_.size())
      throw InvalidInput("period " + std::to_string(j + 1) + " lists " +
                         std::to_string(periods_[j].size()) + " readings for " +
                         std::to_string(totals_.size()) + " meters");
    for (Wh v : periods_[j]) {
      if (v < 0) throw InvalidInput("negative reading in period " + std::to_string(j + 1));
      published += v;
    }
  }
  if (published != energy)
    throw InvalidInput("published readings sum to " + std::to_string(published) +
                       " Wh but billing totals sum to " + std::to_string(energy) + " Wh");
}

PermutationRecord::PermutationRecord(std::vector<std::vector<std::size_t>> perms)
    : perms_(std::move(perms)) {
  const std::size_t n = meters();
  for (std::size_t j = 0; j < perms_.size(); ++j) {
    if (perms_[j].size() != n)
      throw InvalidInput("permutation for period " + std::to_string(j + 1) + " has wrong size");
    std::vector<bool> seen(n, false);
    for (std::size_t p : perms_[j]) {
      if (p >= n || seen[p])
        throw InvalidInput("period " + std::to_string(j + 1) + " is not a permutation");
      seen[p] = true;
    }
  }
}

std::pair<AnonymizedInstance, PermutationRecord> anonymize(const GroundTruth& gt,
                                                           std::uint64_t seed) {
  const ReadingMatrix& m = gt.matrix;
  const std::size_t n = m.meters();
  Rng rng(seed);
  std::vector<std::vector<Wh>> periods(m.periods(), std::vector<Wh>(n));
  std::vector<std::vector<std::size_t>> perms(m.periods());
  for (std::size_t j = 0; j < m.periods(); ++j) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);
    for (std::size_t i = 0; i < n; ++i) periods[j][perm[i]] = m.at(i, j);
    perms[j] = std::move(perm);
  }
  return {AnonymizedInstance(std::move(periods), gt.totals), PermutationRecord(std::move(perms))};
}

ReadingMatrix deanonymize(const AnonymizedInstance& inst, const PermutationRecord& record) {
  if (record.periods() != inst.periods() || record.meters() != inst.meters())
    throw InvalidInput("permutation record does not match instance shape");
  const std::size_t n = inst.meters(), t = inst.periods();
  std::vector<Wh> cells(n * t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < t; ++j) cells[i * t + j] = inst.value(j, record.position(j, i));
  return ReadingMatrix(n, t, std::move(cells));
}

}  // namespace smpriv
