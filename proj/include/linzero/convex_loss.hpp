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

#ifndef LINZERO_CONVEX_LOSS_HPP
#define LINZERO_CONVEX_LOSS_HPP

#include <algorithm>
#include <cmath>

#include "linzero/error.hpp"

namespace linzero {

/// Asymmetric piecewise-quadratic loss on the residual z = X - <theta, A>.
///
/// The two members are the *second derivatives* of the loss on each side,
/// f''(z) = curvature_under for z >= 0 and curvature_over for z < 0, so the
/// loss itself is f(z) = curvature/2 * z^2. Configuring curvatures directly
/// avoids the factor-2 ambiguity of writing f = w z^2: the per-sample weight
/// of the least-squares estimator is exactly the configured number.
///
/// Defaults weight underestimation (observed reward above the estimate) by 1
/// and overestimation by 0.75.
struct ConvexLoss {
  double curvature_under = 1.0;  // residual >= 0
  double curvature_over = 0.75;  // residual < 0

  /// Smoothness bound mu = max f''.
  double mu() const noexcept { return std::max(curvature_under, curvature_over); }
  /// Strong-convexity bound eps = min f''.
  double eps() const noexcept { return std::min(curvature_under, curvature_over); }

  /// f''(residual). A zero residual counts as underestimation.
  double weight(double residual) const noexcept { return residual >= 0.0 ? curvature_under : curvature_over; }

  double value(double residual) const noexcept { return 0.5 * weight(residual) * residual * residual; }

  void check() const {
    if (!(curvature_under > 0.0) || !(curvature_over > 0.0) || !std::isfinite(curvature_under) ||
        !std::isfinite(curvature_over)) {
      throw ConfigError("loss curvatures must be finite and positive");
    }
  }
};

}  // namespace linzero

#endif  // LINZERO_CONVEX_LOSS_HPP
