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

// Known solution sets of the built-in example, as reading sequences.

#pragma once

#include <array>
#include <vector>

#include "smpriv/model.hpp"

namespace smpriv::fixtures {

// Each solution lists the readings of meters 1, 2, 3 over the nine periods.
inline const std::vector<std::vector<std::vector<Wh>>> kExampleJointSolutions = {
    {{362, 64, 119, 23, 140, 36, 108, 83, 56},
     {117, 50, 25, 25, 49, 117, 42, 24, 24},
     {104, 89, 86, 149, 86, 87, 146, 92, 87}},
    {{362, 64, 86, 25, 140, 36, 108, 83, 87},
     {117, 50, 25, 23, 49, 87, 42, 24, 56},
     {104, 89, 119, 149, 86, 117, 146, 92, 24}},
    {{362, 89, 86, 25, 140, 36, 146, 83, 24},
     {117, 50, 25, 23, 49, 87, 42, 24, 56},
     {104, 64, 119, 149, 86, 117, 108, 92, 87}},
};

// Meter 1 readings of every selection summing to 991.
inline const std::vector<std::vector<Wh>> kExampleRelaxedSolutions = {
    {362, 64, 119, 23, 140, 36, 108, 83, 56},  {117, 64, 119, 149, 140, 117, 146, 83, 56},
    {362, 64, 119, 25, 49, 87, 146, 83, 56},   {362, 64, 25, 149, 86, 117, 108, 24, 56},
    {362, 50, 119, 149, 49, 36, 146, 24, 56},  {362, 89, 86, 25, 86, 117, 146, 24, 56},
    {362, 89, 86, 25, 86, 87, 108, 92, 56},    {362, 89, 25, 149, 140, 36, 42, 92, 56},
    {362, 50, 86, 23, 140, 36, 146, 92, 56},   {362, 64, 25, 149, 140, 36, 108, 83, 24},
    {362, 89, 86, 25, 140, 36, 146, 83, 24},   {362, 64, 86, 23, 86, 117, 146, 83, 24},
    {362, 64, 119, 25, 140, 87, 146, 24, 24},  {362, 64, 86, 149, 49, 87, 146, 24, 24},
    {362, 89, 119, 23, 49, 87, 146, 92, 24},   {362, 50, 119, 25, 86, 87, 146, 92, 24},
    {362, 64, 86, 25, 140, 36, 108, 83, 87},   {362, 64, 119, 149, 49, 36, 42, 83, 87},
    {362, 89, 25, 23, 140, 36, 146, 83, 87},   {362, 64, 119, 23, 49, 117, 146, 24, 87},
    {362, 89, 25, 25, 86, 117, 108, 92, 87},   {362, 64, 119, 23, 49, 87, 108, 92, 87},
};

}  // namespace smpriv::fixtures
