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

#include "smpriv/joint.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <boost/dynamic_bitset.hpp>

#include "smpriv/errors.hpp"

namespace smpriv {

namespace {

class JointSearch {
 public:
  JointSearch(const AnonymizedInstance& inst, std::uint64_t work_limit)
      : inst_(inst),
        n_(inst.meters()),
        t_(inst.periods()),
        limit_(work_limit),
        order_(t_),
        running_(n_, 0),
        perms_(t_, std::vector<std::size_t>(n_, 0)),
        used_(n_, false) {
    // Periods with fewer repeated readings first.
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<std::size_t> repeats(t_);
    for (std::size_t j = 0; j < t_; ++j) {
      std::set<Wh> distinct(inst.period(j).begin(), inst.period(j).end());
      repeats[j] = n_ - distinct.size();
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return repeats[a] < repeats[b]; });

    rest_min_.assign(t_ + 1, 0);
    rest_max_.assign(t_ + 1, 0);
    for (std::size_t d = t_; d-- > 0;) {
      auto p = inst.period(order_[d]);
      const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
      rest_min_[d] = rest_min_[d + 1] + *lo;
      rest_max_[d] = rest_max_[d + 1] + *hi;
    }

    // Exact sums reachable by the remaining periods, when the range is small.
    const Wh cap = *std::max_element(inst.totals().begin(), inst.totals().end());
    if (cap <= kReachCap) {
      reach_.assign(t_ + 1, boost::dynamic_bitset<>(static_cast<std::size_t>(cap) + 1));
      reach_[t_].set(0);
      for (std::size_t d = t_; d-- > 0;) {
        const std::set<Wh> distinct(inst.period(order_[d]).begin(), inst.period(order_[d]).end());
        for (Wh v : distinct) reach_[d] |= reach_[d + 1] << static_cast<std::size_t>(v);
      }
    }
  }

  // Returns false when the work limit cut the search short.
  bool run(std::vector<PermutationRecord>& out) {
    out_ = &out;
    for (std::size_t i = 0; i < n_; ++i) {
      const Wh e = inst_.total(i);
      if (e < rest_min_[0] || e > rest_max_[0]) return true;
    }
    return place(0, 0);
  }

  std::uint64_t expansions() const { return expansions_; }

 private:
  bool place(std::size_t depth, std::size_t meter) {
    if (depth == t_) {
      out_->emplace_back(perms_);
      return true;
    }
    if (meter == n_) {
      std::fill(used_.begin(), used_.end(), false);
      const bool ok = place(depth + 1, 0);
      // Restore this period's used flags for the caller's backtracking.
      std::fill(used_.begin(), used_.end(), true);
      return ok;
    }
    const std::size_t j = order_[depth];
    const Wh total = inst_.total(meter);
    for (std::size_t p = 0; p < n_; ++p) {
      if (used_[p]) continue;
      const Wh v = inst_.value(j, p);
      if (has_free_twin_before(j, p, v)) continue;
      const Wh sum = running_[meter] + v;
      if (sum + rest_min_[depth + 1] > total || sum + rest_max_[depth + 1] < total) continue;
      if (!reach_.empty() && !reach_[depth + 1][static_cast<std::size_t>(total - sum)]) continue;
      if (++expansions_ > limit_) return false;
      used_[p] = true;
      running_[meter] = sum;
      perms_[j][meter] = p;
      const bool ok = place(depth, meter + 1);
      running_[meter] -= v;
      used_[p] = false;
      if (!ok) return false;
    }
    return true;
  }

  // Equal readings go to meters in increasing position order.
  bool has_free_twin_before(std::size_t j, std::size_t p, Wh v) const {
    for (std::size_t q = 0; q < p; ++q)
      if (!used_[q] && inst_.value(j, q) == v) return true;
    return false;
  }

  const AnonymizedInstance& inst_;
  std::size_t n_, t_;
  std::uint64_t limit_;
  std::uint64_t expansions_ = 0;
  std::vector<std::size_t> order_;
  static constexpr Wh kReachCap = 1 << 22;

  std::vector<Wh> rest_min_, rest_max_;
  std::vector<boost::dynamic_bitset<>> reach_;  // reach_[d][s]: periods d.. can sum to s
  std::vector<Wh> running_;
  std::vector<std::vector<std::size_t>> perms_;
  std::vector<bool> used_;
  std::vector<PermutationRecord>* out_ = nullptr;
};

// Permutations per stored solution: product of factorials of repeat counts.
Count repeat_multiplier(const AnonymizedInstance& inst) {
  Count m = 1;
  for (std::size_t j = 0; j < inst.periods(); ++j) {
    std::map<Wh, unsigned> groups;
    for (Wh v : inst.period(j)) ++groups[v];
    for (const auto& [v, c] : groups)
      for (unsigned f = 2; f <= c; ++f) m *= f;
  }
  return m;
}

}  // namespace

std::vector<std::vector<Wh>> JointSolutionSet::values(std::size_t s) const {
  const PermutationRecord& rec = solutions.at(s);
  std::vector<std::vector<Wh>> grid(instance.meters(), std::vector<Wh>(instance.periods()));
  for (std::size_t i = 0; i < instance.meters(); ++i)
    for (std::size_t j = 0; j < instance.periods(); ++j)
      grid[i][j] = instance.value(j, rec.position(j, i));
  return grid;
}

bool JointSolutionSet::contains(const PermutationRecord& perms) const {
  if (perms.periods() != instance.periods() || perms.meters() != instance.meters()) return false;
  for (const PermutationRecord& rec : solutions) {
    bool same = true;
    for (std::size_t j = 0; j < instance.periods() && same; ++j)
      for (std::size_t i = 0; i < instance.meters() && same; ++i)
        same = instance.value(j, rec.position(j, i)) == instance.value(j, perms.position(j, i));
    if (same) return true;
  }
  return false;
}

JointSolutionSet solve_joint(const AnonymizedInstance& inst, std::uint64_t work_limit) {
  if (work_limit == 0) throw InvalidInput("work limit must be at least 1");
  JointSolutionSet set{inst, {}, 0, false, 0};
  JointSearch search(inst, work_limit);
  set.exhausted = search.run(set.solutions);
  set.expansions = search.expansions();
  set.raw_permutations = Count(set.solutions.size()) * repeat_multiplier(inst);
  return set;
}

std::vector<AgreedAssignment> agreed_assignments(const JointSolutionSet& sols) {
  if (!sols.exhausted)
    throw InvalidInput("agreement needs the complete solution set; the search was cut short");
  if (sols.solutions.empty()) throw NoSolutions("the joint problem has no solutions");
  const std::size_t n = sols.instance.meters(), t = sols.instance.periods();
  const auto first = sols.values(0);
  std::vector<std::vector<bool>> agreed(n, std::vector<bool>(t, true));
  for (std::size_t s = 1; s < sols.solutions.size(); ++s) {
    const auto grid = sols.values(s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < t; ++j)
        if (grid[i][j] != first[i][j]) agreed[i][j] = false;
  }
  std::vector<AgreedAssignment> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < t; ++j)
      if (agreed[i][j]) out.push_back({i, j, first[i][j]});
  return out;
}

}  // namespace smpriv
