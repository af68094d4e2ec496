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
#include <string>
#include <string_view>

#include "smpriv/model.hpp"

namespace smpriv {

// Readings CSV: mandatory header `meter_id,period,wh` (integer Wh) or
// `meter_id,period,kwh` (kWh with at most three decimals), then one record
// per line. Meters are numbered by first appearance and periods are sorted
// and renumbered 1..t. Every (meter, period) cell must appear exactly once.

ReadingMatrix parse_readings_csv(std::string_view text);
ReadingMatrix parse_kwh_readings(std::string_view text);
/// Chooses the unit from the header.
ReadingMatrix parse_readings(std::string_view text);

/// Exact decimal kWh to Wh, e.g. "0.362" -> 362. Rejects signs, exponents,
/// and more than three decimals.
Wh kwh_to_wh(std::string_view decimal);

/// Wh CSV with meters named 1..n and periods 1..t.
std::string write_readings_csv(const ReadingMatrix& matrix);

/// A uniformly random subset of meters (kept in source order) over a
/// uniformly random window of consecutive periods. Meters come from a
/// partial Fisher-Yates draw on Rng(seed); the window start is drawn after.
ReadingMatrix select_submatrix(const ReadingMatrix& matrix, std::size_t meters,
                               std::size_t periods, std::uint64_t seed);

// Instance text:
//   meters <n>
//   periods <t>
//   totals <E_1> ... <E_n>
//   period 1 <v_1> ... <v_n>
//   ...
//   period t <v_1> ... <v_n>
// Single spaces, LF line ends, trailing LF.

std::string write_instance(const AnonymizedInstance& inst);
AnonymizedInstance parse_instance(std::string_view text);

// Permutation text: `meters <n>`, `periods <t>`, then `period j p_1 ... p_n`
// where p_i is the 1-based position of meter i's reading.

std::string write_permutations(const PermutationRecord& record);
PermutationRecord parse_permutations(std::string_view text);

}  // namespace smpriv
