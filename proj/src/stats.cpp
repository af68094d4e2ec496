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

#include "smpriv/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "smpriv/errors.hpp"

namespace smpriv {

DistributionSpec DistributionSpec::exponential(double mean) {
  DistributionSpec s{Family::Exponential, mean, 0.0};
  s.validate();
  return s;
}

DistributionSpec DistributionSpec::normal(double mean, double sd) {
  DistributionSpec s{Family::Normal, mean, sd};
  s.validate();
  return s;
}

void DistributionSpec::validate() const {
  switch (family) {
    case Family::Exponential:
      if (!(mean > 0.0) || !std::isfinite(mean))
        throw InvalidInput("exponential mean must be positive");
      break;
    case Family::Normal:
      if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean))
        throw InvalidInput("normal standard deviation must be positive");
      break;
  }
}

double DistributionSpec::cdf(double x) const {
  if (family == Family::Exponential) return x <= 0.0 ? 0.0 : -std::expm1(-x / mean);
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

double DistributionSpec::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw InvalidInput("quantile level must lie in [0, 1)");
  if (family == Family::Exponential) return -mean * std::log1p(-u);
  if (u == 0.0) return -HUGE_VAL;
  return boost::math::quantile(boost::math::normal_distribution<double>(mean, sd), u);
}

double DistributionSpec::variance() const {
  return family == Family::Exponential ? mean * mean : sd * sd;
}

double DistributionSpec::draw(Rng& rng) const {
  if (family == Family::Exponential) return -mean * std::log1p(-rng.uniform01());
  const double u1 = 1.0 - rng.uniform01();  // (0, 1]
  const double u2 = rng.uniform01();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string DistributionSpec::name() const {
  return family == Family::Exponential ? "exponential" : "normal";
}

ReadingMatrix sample_reading_matrix(std::size_t meters, std::size_t periods,
                                    const DistributionSpec& target,
                                    const DistributionSpec& others, std::uint64_t seed) {
  if (meters == 0 || periods == 0) throw InvalidInput("need at least one meter and one period");
  target.validate();
  others.validate();
  Rng rng(seed);
  std::vector<Wh> cells(meters * periods);
  for (std::size_t i = 0; i < meters; ++i) {
    const DistributionSpec& spec = i == 0 ? target : others;
    for (std::size_t j = 0; j < periods; ++j) {
      const double x = std::floor(spec.draw(rng) + 0.5);
      cells[i * periods + j] = x > 0.0 ? static_cast<Wh>(x) : 0;
    }
  }
  return ReadingMatrix(meters, periods, std::move(cells));
}

namespace {

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

void require_samples(std::span<const double> xs, std::size_t minimum) {
  if (xs.size() < minimum)
    throw InvalidInput("need at least " + std::to_string(minimum) + " samples, got " +
                       std::to_string(xs.size()));
  for (double x : xs)
    if (!std::isfinite(x)) throw InvalidInput("samples must be finite");
}

}  // namespace

DistributionSpec fit_exponential(std::span<const double> samples) {
  require_samples(samples, 2);
  for (double x : samples)
    if (x < 0.0) throw InvalidInput("exponential samples must be non-negative");
  const double m = mean_of(samples);
  if (m <= 0.0) throw InvalidInput("all samples are zero");
  return DistributionSpec::exponential(m);
}

double exponential_rate_umvue(std::span<const double> samples) {
  const double mean = fit_exponential(samples).mean;
  const double m = static_cast<double>(samples.size());
  return (m - 1.0) / (m * mean);
}

DistributionSpec fit_normal(std::span<const double> samples) {
  require_samples(samples, 2);
  const double m = mean_of(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(samples.size() - 1);
  if (!(var > 0.0)) throw InvalidInput("samples have zero variance");
  return DistributionSpec::normal(m, std::sqrt(var));
}

double cvm_statistic(std::span<const double> samples, const DistributionSpec& spec) {
  require_samples(samples, 1);
  spec.validate();
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double w2 = 1.0 / (12.0 * m);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double d = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * m) - spec.cdf(sorted[i]);
    w2 += d * d;
  }
  return w2;
}

std::span<const FamilyFitter> default_families() {
  static constexpr std::array<FamilyFitter, 2> families{{
      {"exponential", &fit_exponential},
      {"normal", &fit_normal},
  }};
  return families;
}

std::vector<FitResult> rank_distributions(std::span<const double> samples,
                                          std::span<const FamilyFitter> families) {
  require_samples(samples, 2);
  std::vector<FitResult> out;
  out.reserve(families.size());
  for (const FamilyFitter& f : families) {
    const DistributionSpec spec = f.fit(samples);
    out.push_back({spec, cvm_statistic(samples, spec), samples.size()});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FitResult& a, const FitResult& b) { return a.cvm < b.cvm; });
  return out;
}

}  // namespace smpriv
