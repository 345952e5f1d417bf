// Copyright 2026 The fogdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>

namespace fogdist {

// Six-number summary. Whiskers are the sample min and max.
struct BoxplotStats {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double mean = 0;
  double q3 = 0;
  double max = 0;
  std::size_t count = 0;

  double iqr() const { return q3 - q1; }
};

// Linear interpolation between order statistics at h = (n - 1) p (the
// "type 7" rule). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

// Throws std::domain_error on an empty sample.
BoxplotStats boxplot(std::span<const double> samples);

}  // namespace fogdist
