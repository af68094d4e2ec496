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
#include <span>
#include <string>
#include <vector>

#include "smpriv/model.hpp"
#include "smpriv/rng.hpp"

namespace smpriv {

enum class Family { Exponential, Normal };

/// A candidate reading distribution. Parameters are in Wh: the exponential
/// family is parameterized by its mean (1 / rate), the normal family by
/// mean and standard deviation.
struct DistributionSpec {
  Family family = Family::Exponential;
  double mean = 0.0;
  double sd = 0.0;  // normal only

  static DistributionSpec exponential(double mean);
  static DistributionSpec normal(double mean, double sd);

  /// Throws InvalidInput unless mean > 0 (exponential) or sd > 0 (normal).
  void validate() const;

  double cdf(double x) const;
  double quantile(double u) const;
  double variance() const;

  /// One continuous draw by inverse-CDF for the exponential family
  /// (-mean * log(1 - U)) and by the cosine branch of Box-Muller for the
  /// normal family (two uniforms per draw).
  double draw(Rng& rng) const;

  std::string name() const;
};

/// Readings for n meters over t periods: meter 1 from `target`, the others
/// from `others`. Draws run meter by meter, period by period, from
/// Rng(seed); each is rounded half-up to whole Wh and clamped at zero.
ReadingMatrix sample_reading_matrix(std::size_t meters, std::size_t periods,
                                    const DistributionSpec& target,
                                    const DistributionSpec& others, std::uint64_t seed);

/// Mean = sample mean, the minimum-variance unbiased estimator of the
/// exponential mean.
DistributionSpec fit_exponential(std::span<const double> samples);

/// Unbiased rate estimate (m - 1) / (m * mean).
double exponential_rate_umvue(std::span<const double> samples);

/// Sample mean and unbiased (m - 1 divisor) variance.
DistributionSpec fit_normal(std::span<const double> samples);

/// One-sample Cramer-von Mises W^2 against a fully specified model:
///   1/(12m) + sum_i ((2i - 1)/(2m) - F(x_(i)))^2  over sorted samples.
double cvm_statistic(std::span<const double> samples, const DistributionSpec& spec);

struct FitResult {
  DistributionSpec spec;
  double cvm = 0.0;
  std::size_t samples = 0;
};

/// A family that can be fitted and ranked.
struct FamilyFitter {
  const char* name;
  DistributionSpec (*fit)(std::span<const double>);
};

/// Exponential and normal.
std::span<const FamilyFitter> default_families();

/// Fits each family and orders the fits by W^2, best first. Ties keep the
/// order of `families`.
std::vector<FitResult> rank_distributions(std::span<const double> samples,
                                          std::span<const FamilyFitter> families = default_families());

}  // namespace smpriv
