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
#include <string>
#include <vector>

#include "smpriv/joint.hpp"
#include "smpriv/mcssp.hpp"
#include "smpriv/privacy.hpp"
#include "smpriv/stats.hpp"

namespace smpriv {

enum class TableFormat { Csv, Markdown };

/// Human report (markdown, 4 decimals) or long-form CSV with header
/// `period,position,value,count,probability,entropy` at full precision.
/// Positions with probability >= reveal_threshold are listed in markdown.
std::string render_entropy_report(const AnonymizedInstance& inst, const MarginalCounts& mc,
                                  const EntropyReport& report, TableFormat format,
                                  double reveal_threshold = 1.0);

/// One line per selection, written as its readings: `a + b + ... = E`.
std::string render_enumeration(const AnonymizedInstance& inst, const Enumeration& en);

/// Each joint solution as one `a + b + ... = E_i` line per meter, followed by
/// the agreed readings when the search completed.
std::string render_joint(const JointSolutionSet& sols);

/// Ranked fits. CSV header: `rank,family,mean,sd,rate_umvue,cvm,samples`.
std::string render_fits(std::span<const FitResult> fits, std::span<const double> samples,
                        TableFormat format);

/// Fixed-point with `decimals` digits.
std::string fixed(double value, int decimals);

}  // namespace smpriv
