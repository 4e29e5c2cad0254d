// Copyright 2026 The LinZero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINZERO_REGRET_HPP
#define LINZERO_REGRET_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "linzero/error.hpp"

namespace linzero {

/// High-probability regret bound of the ellipsoid rule after t steps:
///   sqrt(8 mu nd t beta_t ln((nd lambda + mu n t) / (nd lambda))).
inline double bound_value(double t, int agents, int actions, double mu, double lambda, double beta) {
  if (!(t >= 1.0)) throw ContractViolation("bound_value needs t >= 1");
  const double nd = static_cast<double>(agents) * actions;
  const double log_term = std::log((nd * lambda + mu * agents * t) / (nd * lambda));
  return std::sqrt(8.0 * mu * nd * t * beta * log_term);
}

/// Per-step realized regret of one run.
class RegretTrace {
 public:
  void push(double regret, double beta = std::numeric_limits<double>::quiet_NaN(),
            double bound = std::numeric_limits<double>::quiet_NaN()) {
    step_.push_back(regret);
    cumulative_.push_back((cumulative_.empty() ? 0.0 : cumulative_.back()) + regret);
    beta_.push_back(beta);
    bound_.push_back(bound);
  }

  std::size_t size() const noexcept { return step_.size(); }
  const std::vector<double>& step() const noexcept { return step_; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  const std::vector<double>& beta() const noexcept { return beta_; }
  const std::vector<double>& bound() const noexcept { return bound_; }
  double total() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  /// True when the cumulative regret never exceeds the recorded bound.
  bool within_bound() const {
    for (std::size_t t = 0; t < size(); ++t) {
      if (std::isfinite(bound_[t]) && cumulative_[t] > bound_[t]) return false;
    }
    return true;
  }

 private:
  std::vector<double> step_;
  std::vector<double> cumulative_;
  std::vector<double> beta_;
  std::vector<double> bound_;
};

/// Linear-interpolated quantile, q in [0, 1].
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ContractViolation("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

/// Mean and sample standard deviation (n - 1); sd is 0 for one value.
inline MeanSd mean_sd(const std::vector<double>& values) {
  if (values.empty()) throw ContractViolation("mean of an empty sample");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace linzero

#endif  // LINZERO_REGRET_HPP
