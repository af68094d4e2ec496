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

#include "smpriv/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smpriv/errors.hpp"

namespace smpriv {

namespace {

const Real& ln2() {
  static const Real value = boost::multiprecision::log(Real(2));
  return value;
}

}  // namespace

std::vector<double> PeriodDistribution::as_double() const {
  std::vector<double> out;
  out.reserve(probabilities.size());
  for (const Real& p : probabilities) out.push_back(static_cast<double>(p));
  return out;
}

std::vector<PeriodDistribution> marginal_probabilities(const MarginalCounts& mc) {
  if (mc.total_solutions <= 0) throw NoSolutions("probabilities need at least one solution");
  const Real total(mc.total_solutions);
  std::vector<PeriodDistribution> out(mc.counts.size());
  for (std::size_t j = 0; j < mc.counts.size(); ++j) {
    out[j].period = j;
    out[j].probabilities.reserve(mc.counts[j].size());
    for (const Count& c : mc.counts[j]) out[j].probabilities.push_back(Real(c) / total);
  }
  return out;
}

double period_entropy(const PeriodDistribution& dist) {
  Real h = 0;
  for (const Real& p : dist.probabilities)
    if (p > 0) h -= p * boost::multiprecision::log(p);
  return static_cast<double>(h / ln2());
}

double shannon_entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

EntropyReport entropy_report(const MarginalCounts& mc) {
  const auto dists = marginal_probabilities(mc);
  EntropyReport r;
  r.target_meter = mc.target_meter;
  r.total_solutions = mc.total_solutions;
  r.period_entropies.reserve(dists.size());
  for (const auto& d : dists) r.period_entropies.push_back(period_entropy(d));
  if (!r.period_entropies.empty())
    r.average = std::accumulate(r.period_entropies.begin(), r.period_entropies.end(), 0.0) /
                static_cast<double>(r.period_entropies.size());
  const std::size_t n = mc.counts.empty() ? 1 : mc.counts.front().size();
  r.max_entropy = std::log2(static_cast<double>(n));
  return r;
}

std::vector<RevealedPosition> revealed_positions(std::span<const PeriodDistribution> dists,
                                                 double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw InvalidInput("threshold must lie in (0, 1]");
  const Real bar(threshold);
  std::vector<RevealedPosition> out;
  for (const auto& d : dists)
    for (std::size_t k = 0; k < d.probabilities.size(); ++k)
      if (d.probabilities[k] >= bar)
        out.push_back({d.period, k, static_cast<double>(d.probabilities[k])});
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.period < b.period; });
  return out;
}

}  // namespace smpriv
