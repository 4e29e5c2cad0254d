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

#ifndef LINZERO_PRIOR_HPP
#define LINZERO_PRIOR_HPP

#include <cmath>
#include <string>
#include <vector>

#include "linzero/error.hpp"
#include "linzero/joint_action.hpp"
#include "linzero/random.hpp"

namespace linzero {

/// Search prior P(s, a) as a product of independent per-agent distributions.
class PriorModel {
 public:
  static PriorModel uniform(const ActionSpace& space) {
    space.check();
    return PriorModel(std::vector<std::vector<double>>(
        space.agents, std::vector<double>(space.actions_per_agent, 1.0 / space.actions_per_agent)));
  }

  /// Normalises each agent's weights. Throws ConfigError when a row is empty,
  /// negative, non-finite, or sums to zero.
  explicit PriorModel(std::vector<std::vector<double>> per_agent) : rows_(std::move(per_agent)) {
    if (rows_.empty()) throw ConfigError("prior needs at least one agent");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto& row = rows_[i];
      double total = 0.0;
      for (double p : row) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw ConfigError("prior weights of agent " + std::to_string(i) + " must be finite and non-negative");
        }
        total += p;
      }
      if (row.empty() || !(total > 0.0)) {
        throw ConfigError("prior of agent " + std::to_string(i) + " is not normalizable");
      }
      for (double& p : row) p /= total;
    }
  }

  std::size_t agents() const noexcept { return rows_.size(); }
  const std::vector<double>& agent(std::size_t i) const { return rows_[i]; }

  double probability(const JointAction& action) const {
    double p = 1.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) p *= rows_[i][action[i]];
    return p;
  }

  /// prod_i geomean_j p_i(j); equals P(s, a) for every a when the prior is uniform.
  double geometric_scale() const {
    double log_scale = 0.0;
    for (const auto& row : rows_) {
      double s = 0.0;
      for (double p : row) s += std::log(p);
      log_scale += s / static_cast<double>(row.size());
    }
    return std::exp(log_scale);
  }

  JointAction sample(Rng& rng) const {
    std::vector<int> indices(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) indices[i] = static_cast<int>(rng.categorical(rows_[i]));
    return JointAction(std::move(indices));
  }

  bool compatible(const ActionSpace& space) const {
    if (static_cast<int>(rows_.size()) != space.agents) return false;
    for (const auto& row : rows_) {
      if (static_cast<int>(row.size()) != space.actions_per_agent) return false;
    }
    return true;
  }

 private:
  std::vector<std::vector<double>> rows_;
};

}  // namespace linzero

#endif  // LINZERO_PRIOR_HPP
