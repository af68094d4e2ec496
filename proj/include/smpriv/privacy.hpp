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
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "smpriv/mcssp.hpp"

namespace smpriv {

/// 50 significant decimal digits; enough that counts near 2^300 divide
/// without visible loss.
using Real = boost::multiprecision::cpp_bin_float_50;

/// The attacker's belief about which position holds the target meter's
/// reading in one period.
struct PeriodDistribution {
  std::size_t period = 0;  // 0-based
  std::vector<Real> probabilities;

  std::vector<double> as_double() const;
};

/// counts[j][k] / N for every period, each ratio rounded to nearest in Real.
/// Throws NoSolutions when N is zero.
std::vector<PeriodDistribution> marginal_probabilities(const MarginalCounts& mc);

/// Shannon entropy in bits; zero-probability terms contribute nothing.
double period_entropy(const PeriodDistribution& dist);
double shannon_entropy_bits(std::span<const double> probabilities);

struct EntropyReport {
  std::size_t target_meter = 0;  // 0-based
  Count total_solutions;
  std::vector<double> period_entropies;
  double average = 0.0;
  double max_entropy = 0.0;  // log2 n
};

EntropyReport entropy_report(const MarginalCounts& mc);

struct RevealedPosition {
  std::size_t period;    // 0-based
  std::size_t position;  // 0-based
  double probability;
};

/// Positions whose probability reaches `threshold` in (0, 1], by period.
/// A threshold of 1 lists the readings every solution agrees on.
std::vector<RevealedPosition> revealed_positions(std::span<const PeriodDistribution> dists,
                                                 double threshold);

}  // namespace smpriv
