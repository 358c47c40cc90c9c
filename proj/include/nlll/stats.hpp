// Copyright 2026 The noisy-lll Authors. All rights reserved.
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

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>

#include <boost/math/distributions/students_t.hpp>

#include "nlll/error.hpp"

namespace nlll {

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double std_dev = 0.0;         // sample standard deviation (n - 1)
  double std_error = 0.0;       // std_dev / sqrt(n)
  double ci_half_width = 0.0;   // t_{(1+level)/2, n-1} * std_error
};

inline double mean_of(std::span<const double> xs) {
  require(!xs.empty(), ErrorKind::kInvalidInput, "mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  require(xs.size() >= 2, ErrorKind::kInvalidInput,
          "variance needs at least two samples");
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

inline double student_t_quantile(double prob, std::size_t dof) {
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, prob);
}

// Two-sided Student-t confidence interval for the mean.
inline SampleSummary summarize(std::span<const double> xs,
                               double level = 0.95) {
  require(xs.size() >= 2, ErrorKind::kInvalidInput,
          "a confidence interval needs at least two samples");
  SampleSummary s;
  s.count = xs.size();
  s.mean = mean_of(xs);
  s.std_dev = std::sqrt(sample_variance(xs));
  s.std_error = s.std_dev / std::sqrt(static_cast<double>(s.count));
  s.ci_half_width =
      student_t_quantile(0.5 * (1.0 + level), s.count - 1) * s.std_error;
  return s;
}

}  // namespace nlll
