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

#include "smpriv/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace smpriv {

namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sum_line(std::span<const Wh> values, Wh total) {
  std::ostringstream os;
  for (std::size_t k = 0; k < values.size(); ++k) os << (k ? " + " : "") << values[k];
  os << " = " << total;
  return os.str();
}

}  // namespace

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string render_entropy_report(const AnonymizedInstance& inst, const MarginalCounts& mc,
                                  const EntropyReport& report, TableFormat format,
                                  double reveal_threshold) {
  const auto dists = marginal_probabilities(mc);
  std::ostringstream os;
  if (format == TableFormat::Csv) {
    os << "period,position,value,count,probability,entropy\n";
    for (std::size_t j = 0; j < dists.size(); ++j)
      for (std::size_t k = 0; k < inst.meters(); ++k)
        os << j + 1 << ',' << k + 1 << ',' << inst.value(j, k) << ',' << mc.counts[j][k] << ','
           << full(static_cast<double>(dists[j].probabilities[k])) << ','
           << full(report.period_entropies[j]) << '\n';
    return os.str();
  }

  os << "# Entropy report for meter " << mc.target_meter + 1 << "\n\n"
     << "Billing total: " << mc.target_total << " Wh\n"
     << "N = " << mc.total_solutions << "\n\n"
     << "| Period | Readings | Probabilities | Entropy (bits) |\n"
     << "|---|---|---|---|\n";
  for (std::size_t j = 0; j < dists.size(); ++j) {
    os << "| " << j + 1 << " | ";
    for (std::size_t k = 0; k < inst.meters(); ++k) os << (k ? ", " : "") << inst.value(j, k);
    os << " | ";
    for (std::size_t k = 0; k < inst.meters(); ++k)
      os << (k ? ", " : "") << mc.counts[j][k] << '/' << mc.total_solutions;
    os << " | " << fixed(report.period_entropies[j], 4) << " |\n";
  }
  os << "\nAverage entropy: " << fixed(report.average, 4) << " bits\n"
     << "Max. entropy: " << fixed(report.max_entropy, 4) << " bits\n";

  const auto revealed = revealed_positions(dists, reveal_threshold);
  os << "\nPositions with probability >= " << fixed(reveal_threshold, 4) << ':'
     << (revealed.empty() ? " none" : "") << '\n';
  for (const auto& r : revealed)
    os << "- period " << r.period + 1 << ", position " << r.position + 1 << " ("
       << inst.value(r.period, r.position) << " Wh), p = " << fixed(r.probability, 4) << '\n';
  return os.str();
}

std::string render_enumeration(const AnonymizedInstance& inst, const Enumeration& en) {
  std::ostringstream os;
  Wh total = 0;
  for (const Selection& sel : en.selections) {
    std::vector<Wh> values(sel.size());
    total = 0;
    for (std::size_t j = 0; j < sel.size(); ++j) total += values[j] = inst.value(j, sel[j]);
    os << sum_line(values, total) << '\n';
  }
  if (en.truncated)
    os << "(stopped after " << en.selections.size() << " of " << en.total_solutions
       << " solutions)\n";
  return os.str();
}

std::string render_joint(const JointSolutionSet& sols) {
  std::ostringstream os;
  const AnonymizedInstance& inst = sols.instance;
  os << "Joint solutions: " << sols.solutions.size() << " distinct value assignments ("
     << sols.raw_permutations << " permutation tuples)"
     << (sols.exhausted ? "" : ", search stopped at the work limit") << "\n";
  for (std::size_t s = 0; s < sols.solutions.size(); ++s) {
    os << "\nSolution " << s + 1 << ":\n";
    const auto grid = sols.values(s);
    for (std::size_t i = 0; i < inst.meters(); ++i)
      os << "  " << sum_line(grid[i], inst.total(i)) << '\n';
  }
  if (!sols.exhausted || sols.solutions.empty()) return os.str();

  const auto agreed = agreed_assignments(sols);
  os << "\nAgreed readings:\n";
  for (std::size_t i = 0; i < inst.meters(); ++i) {
    os << "  meter " << i + 1 << ":";
    std::size_t count = 0;
    for (const auto& a : agreed) {
      if (a.meter != i) continue;
      os << (count++ ? "," : "") << " e(" << i + 1 << ',' << a.period + 1 << ")=" << a.value;
    }
    os << (count ? "" : " none") << " [" << count << " of " << inst.periods() << " periods]\n";
  }
  return os.str();
}

std::string render_fits(std::span<const FitResult> fits, std::span<const double> samples,
                        TableFormat format) {
  std::ostringstream os;
  auto rate = [&](const FitResult& f) {
    return f.spec.family == Family::Exponential ? full(exponential_rate_umvue(samples)) : std::string();
  };
  if (format == TableFormat::Csv) {
    os << "rank,family,mean,sd,rate_umvue,cvm,samples\n";
    for (std::size_t r = 0; r < fits.size(); ++r) {
      const FitResult& f = fits[r];
      os << r + 1 << ',' << f.spec.name() << ',' << full(f.spec.mean) << ','
         << full(std::sqrt(f.spec.variance())) << ',' << rate(f) << ',' << full(f.cvm) << ','
         << f.samples << '\n';
    }
    return os.str();
  }
  os << "| Rank | Family | Parameters | W^2 |\n|---|---|---|---|\n";
  for (std::size_t r = 0; r < fits.size(); ++r) {
    const FitResult& f = fits[r];
    os << "| " << r + 1 << " | " << f.spec.name() << " | mean " << fixed(f.spec.mean, 4);
    if (f.spec.family == Family::Normal)
      os << ", sd " << fixed(f.spec.sd, 4);
    else
      os << ", rate " << rate(f);
    os << " | " << fixed(f.cvm, 6) << " |\n";
  }
  os << "\nSamples: " << (fits.empty() ? 0 : fits.front().samples) << '\n';
  return os.str();
}

}  // namespace smpriv
