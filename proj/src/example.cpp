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

#include "smpriv/example.hpp"

#include <sstream>

#include "smpriv/joint.hpp"
#include "smpriv/mcssp.hpp"
#include "smpriv/privacy.hpp"
#include "smpriv/render.hpp"

namespace smpriv {

AnonymizedInstance example_instance() {
  return AnonymizedInstance({{117, 104, 362},
                             {89, 50, 64},
                             {25, 119, 86},
                             {23, 25, 149},
                             {86, 140, 49},
                             {36, 87, 117},
                             {42, 146, 108},
                             {24, 83, 92},
                             {56, 24, 87}},
                            {991, 473, 926});
}

ReadingMatrix example_ground_truth() {
  return ReadingMatrix::from_rows({{362, 64, 119, 23, 140, 36, 108, 83, 56},
                                   {117, 50, 25, 25, 49, 117, 42, 24, 24},
                                   {104, 89, 86, 149, 86, 87, 146, 92, 87}});
}

std::string reproduce_example() {
  const AnonymizedInstance inst = example_instance();
  std::ostringstream os;
  os << "# Worked example: 3 meters, 9 periods\n\n"
     << "Billing totals: E_1 = 991, E_2 = 473, E_3 = 926\n\n";
  for (std::size_t j = 0; j < inst.periods(); ++j) {
    os << "period " << j + 1 << ":";
    for (Wh v : inst.period(j)) os << ' ' << v;
    os << '\n';
  }

  os << "\n## Full problem\n\n" << render_joint(solve_joint(inst));

  const MarginalCounts mc = marginal_counts(inst, 0);
  const Enumeration en = enumerate_solutions(inst, 0, 1000);
  os << "\n## Relaxed problem for meter 1\n\n"
     << "N = " << mc.total_solutions << "\n\n"
     << render_enumeration(inst, en) << '\n'
     << render_entropy_report(inst, mc, entropy_report(mc), TableFormat::Markdown, 0.95);
  return os.str();
}

}  // namespace smpriv
