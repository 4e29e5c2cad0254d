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

// LinUCT scores and the confidence-radius schedule.

#ifndef LINZERO_LINUCT_HPP
#define LINZERO_LINUCT_HPP

#include <cmath>
#include <limits>

#include "linzero/design_state.hpp"
#include "linzero/error.hpp"
#include "linzero/joint_action.hpp"

namespace linzero {

/// Tree score used during search:
///   a^T theta + c * P(s,a) * trace(V) * sqrt(a^T V^{-1} a).
/// trace(V) grows linearly with the visit count and plays the role of the
/// total-visit term of pUCT.
inline double ucb_score(const DesignState& design, const JointAction& action, double prior, double c) {
  if (!(prior >= 0.0 && prior <= 1.0)) throw ContractViolation("prior probability outside [0, 1]");
  const double q = design.quad_form(action);
  return design.predict(action) + c * prior * design.trace() * std::sqrt(std::max(q, 0.0));
}

/// Optimistic bandit score  <theta, a> + beta * ||a||_{V^{-1}}.
inline double ellipsoid_score(const DesignState& design, const JointAction& action, double beta) {
  return design.predict(action) + beta * std::sqrt(std::max(design.quad_form(action), 0.0));
}

/// Confidence radius
///   beta_t = sqrt(2 mu ln(det(V_t)^{1/2} / (det(lambda I)^{1/2} delta))) + sqrt(lambda) S
/// with ln det(V_t) - ln det(lambda I) accumulated one observation at a time as
/// ln(1 + w ||A||^2_{V^{-1}}).
struct BetaSchedule {
  double delta = 0.01;
  double s_bound = 1.0;
  double mu = 1.0;
  double lambda = 1e-4;
  double logdet_accum = 0.0;

  void check() const {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("confidence delta must lie in (0, 1)");
    if (!(s_bound >= 0.0) || !std::isfinite(s_bound)) throw ConfigError("norm bound S must be non-negative");
    if (!(mu > 0.0) || !(lambda > 0.0)) throw ConfigError("mu and lambda must be positive");
  }

  /// Accounts for one observation with weight w and q = A^T V_{t-1}^{-1} A.
  void record(double weight, double quad) { logdet_accum += std::log1p(weight * quad); }

  double value_at(double log_det_ratio) const {
    check();
    const double inner = 0.5 * log_det_ratio - std::log(delta);
    return std::sqrt(2.0 * mu * std::max(inner, 0.0)) + std::sqrt(lambda) * s_bound;
  }

  double value() const { return value_at(logdet_accum); }
};

}  // namespace linzero

#endif  // LINZERO_LINUCT_HPP
