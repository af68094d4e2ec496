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

#include <string>

#include "smpriv/model.hpp"

namespace smpriv {

/// Three meters over nine periods with billing totals 991, 473 and 926 Wh.
AnonymizedInstance example_instance();

/// One assignment consistent with example_instance(): the readings behind
/// its first joint solution.
ReadingMatrix example_ground_truth();

/// Full walk-through of the example: joint solutions and the readings they
/// pin down, the relaxed solutions for meter 1, and per-period entropies.
std::string reproduce_example();

}  // namespace smpriv
