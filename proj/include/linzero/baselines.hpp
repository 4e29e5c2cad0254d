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

// Scores of the comparison selectors.

#ifndef LINZERO_BASELINES_HPP
#define LINZERO_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "linzero/error.hpp"

namespace linzero {

enum class SelectorKind { kLinUct, kPuct, kFlatUcb, kRandom };

inline std::string to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::kLinUct: return "linuct";
    case SelectorKind::kPuct: return "puct";
    case SelectorKind::kFlatUcb: return "flat_ucb";
    case SelectorKind::kRandom: return "random";
  }
  return "?";
}

inline SelectorKind parse_selector(const std::string& text) {
  if (text == "linuct") return SelectorKind::kLinUct;
  if (text == "puct") return SelectorKind::kPuct;
  if (text == "flat_ucb") return SelectorKind::kFlatUcb;
  if (text == "random") return SelectorKind::kRandom;
  throw ConfigError("unknown selector '" + text + "' (linuct, puct, flat_ucb, random)");
}

/// c(s) = c1 + ln((sum_b N(s,b) + c2 + 1) / c2).
inline double exploration_coefficient(double total_visits, double c1 = 1.25, double c2 = 19652.0) {
  return c1 + std::log((total_visits + c2 + 1.0) / c2);
}

/// Q(s,a) + c(s) P(s,a) sqrt(sum_b N(s,b)) / (N(s,a) + 1).
inline double puct_score(double q, double prior, double total_visits, double visits, double c) {
  return q + c * prior * std::sqrt(total_visits) / (visits + 1.0);
}

/// UCB1: mean + sqrt(2 ln(total) / pulls), +inf for an unpulled arm.
inline double flat_ucb_score(double mean, double pulls, double total_pulls) {
  if (pulls <= 0.0) return std::numeric_limits<double>::infinity();
  return mean + std::sqrt(2.0 * std::log(std::max(total_pulls, 1.0)) / pulls);
}

/// Running min/max of backed-up values, for optional Q normalisation.
class MinMax {
 public:
  void observe(double v) {
    lo_ = std::min(lo_, v);
    hi_ = std::max(hi_, v);
  }
  double normalize(double v) const { return hi_ > lo_ ? (v - lo_) / (hi_ - lo_) : v; }

 private:
  double lo_ = std::numeric_limits<double>::infinity();
  double hi_ = -std::numeric_limits<double>::infinity();
};

}  // namespace linzero

#endif  // LINZERO_BASELINES_HPP
