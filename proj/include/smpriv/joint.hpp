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
#include <vector>

#include "smpriv/mcssp.hpp"
#include "smpriv/model.hpp"

namespace smpriv {

/// Every assignment of readings to meters, period by period, that matches
/// all billing totals at once.
///
/// Assignments differing only by swapping equal readings within a period
/// are stored once, as the representative that gives equal readings to
/// meters in increasing position order. `raw_permutations` counts them
/// all.
struct JointSolutionSet {
  AnonymizedInstance instance;
  std::vector<PermutationRecord> solutions;
  Count raw_permutations;
  /// False when the work limit stopped the search; `solutions` is then partial.
  bool exhausted = false;
  std::uint64_t expansions = 0;

  /// values[i][j]: reading given to meter i in period j by solution s.
  std::vector<std::vector<Wh>> values(std::size_t s) const;

  /// True if `perms` assigns the same readings as some stored solution.
  bool contains(const PermutationRecord& perms) const;
};

inline constexpr std::uint64_t kDefaultJointWorkLimit = 100'000'000;

/// Depth-first search over periods, placing one reading per meter. A branch
/// dies once some meter's running sum can no longer reach its total within
/// the remaining periods' min/max. `work_limit` caps placements tried.
JointSolutionSet solve_joint(const AnonymizedInstance& inst,
                             std::uint64_t work_limit = kDefaultJointWorkLimit);

struct AgreedAssignment {
  std::size_t meter;   // 0-based
  std::size_t period;  // 0-based
  Wh value;

  friend bool operator==(const AgreedAssignment&, const AgreedAssignment&) = default;
};

/// (meter, period) cells on which every solution gives the same reading,
/// ordered by meter then period. Rejects empty or partial solution sets.
std::vector<AgreedAssignment> agreed_assignments(const JointSolutionSet& sols);

}  // namespace smpriv
