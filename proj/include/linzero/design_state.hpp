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

// Incremental weighted ridge regression over n-hot joint actions.
//
//   V_t     = lambda I + sum_s w_s A_s A_s^T
//   M_t     = sum_s w_s A_s X_s
//   theta_t = V_t^{-1} M_t
//
// V_t is never inverted. With u = V_t^{-1} A and q = A^T u, one observation
// (A, X, w) is absorbed by the Sherman-Morrison identities
//
//   V_{t+1}^{-1} A_i = V_t^{-1} A_i - w u (u^T A_i) / (1 + w q)
//   theta_{t+1}      = theta_t + w u (X - A^T theta_t) / (1 + w q)
//
// which cost O(nd) per cached candidate A_i. Because every A is n-hot, the
// inner products u^T A_i are sums of n entries.
//
// Products V_t^{-1} x for vectors that were never cached are available in two
// ways, chosen by InverseMode:
//   kDense   keeps the full V_t^{-1} (O((nd)^2) per update);
//   kHistory keeps (u_s, w_s / (1 + w_s q_s)) for every update and replays
//            V_t^{-1} x = x / lambda - sum_s c_s u_s (u_s^T x), O(t nd).
// kAuto picks kDense up to `dense_limit` coordinates.

#ifndef LINZERO_DESIGN_STATE_HPP
#define LINZERO_DESIGN_STATE_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "linzero/error.hpp"
#include "linzero/joint_action.hpp"

namespace linzero {

enum class InverseMode { kAuto, kDense, kHistory };

struct DesignOptions {
  double lambda = 1e-4;
  InverseMode mode = InverseMode::kAuto;
  int dense_limit = 64;
  /// When set, scoring an action that is not in the cache is a contract
  /// violation instead of a lazy O(t nd) / O((nd)^2) computation.
  bool require_registration = false;
};

class DesignState {
 public:
  explicit DesignState(ActionSpace space, DesignOptions options = {})
      : space_(space), options_(options) {
    space_.check();
    if (!(options_.lambda > 0.0) || !std::isfinite(options_.lambda)) {
      throw ConfigError("ridge constant lambda must be finite and positive");
    }
    const int nd = space_.dim();
    dense_ = options_.mode == InverseMode::kDense ||
             (options_.mode == InverseMode::kAuto && nd <= options_.dense_limit);
    theta_ = Eigen::VectorXd::Zero(nd);
    m_accum_ = Eigen::VectorXd::Zero(nd);
    trace_ = nd * options_.lambda;
    if (dense_) vinv_ = Eigen::MatrixXd::Identity(nd, nd) / options_.lambda;
  }

  const ActionSpace& space() const noexcept { return space_; }
  const DesignOptions& options() const noexcept { return options_; }
  double lambda() const noexcept { return options_.lambda; }
  bool dense() const noexcept { return dense_; }

  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  const Eigen::VectorXd& m_accum() const noexcept { return m_accum_; }
  /// trace(V_t) = nd lambda + n sum_s w_s.
  double trace() const noexcept { return trace_; }
  double weight_sum() const noexcept { return weight_sum_; }
  std::size_t update_count() const noexcept { return update_count_; }
  /// ln det(V_t) - ln det(lambda I), accumulated by the matrix determinant lemma.
  double log_det_ratio() const noexcept { return log_det_ratio_; }

  bool is_registered(const JointAction& action) const { return cache_.contains(action); }
  std::size_t candidate_count() const noexcept { return cache_.size(); }

  /// Adds `action` to the candidate cache (no-op if present).
  void register_candidate(const JointAction& action) {
    if (cache_.contains(action)) return;
    Entry entry{coordinates(space_, action), {}};
    entry.vinv_a = solve_uncached(entry.coords);
    cache_.emplace(action, std::move(entry));
  }

  /// Cached V_t^{-1} a, or nullptr.
  const Eigen::VectorXd* cached(const JointAction& action) const {
    const auto it = cache_.find(action);
    return it == cache_.end() ? nullptr : &it->second.vinv_a;
  }

  /// V_t^{-1} a from the cache when registered, otherwise computed.
  Eigen::VectorXd vinv_times(const JointAction& action) const {
    if (const auto* hit = cached(action)) return *hit;
    if (options_.require_registration) {
      throw ContractViolation("action " + action.to_string() + " is not registered in the design cache");
    }
    return solve_uncached(coordinates(space_, action));
  }

  /// a^T V_t^{-1} a.
  double quad_form(const JointAction& action) const {
    if (const auto* hit = cached(action)) return sum_at(*hit, coordinates(space_, action));
    const auto coords = coordinates(space_, action);
    if (options_.require_registration) {
      throw ContractViolation("action " + action.to_string() + " is not registered in the design cache");
    }
    if (dense_) {
      double q = 0.0;
      for (int r : coords) {
        for (int c : coords) q += vinv_(r, c);
      }
      return q;
    }
    return sum_at(solve_uncached(coords), coords);
  }

  /// a^T theta_t.
  double predict(const JointAction& action) const { return sum_at(theta_, coordinates(space_, action)); }

  /// Absorbs one weighted observation. The action is registered if needed.
  void update(const JointAction& action, double reward, double weight) {
    if (!std::isfinite(reward)) throw NumericError("non-finite reward in design update");
    if (!(weight > 0.0) || !std::isfinite(weight)) throw NumericError("design update weight must be positive");
    register_candidate(action);
    const Entry& self = cache_.at(action);
    const std::vector<int> coords = self.coords;
    const Eigen::VectorXd u = self.vinv_a;

    const double q = sum_at(u, coords);
    const double denom = 1.0 + weight * q;
    if (denom < 1.0 - 1e-9) throw NumericError("Sherman-Morrison denominator below 1; design lost definiteness");
    const double residual = reward - sum_at(theta_, coords);
    const double gain = weight / denom;

    theta_.noalias() += (gain * residual) * u;
    for (int c : coords) m_accum_[c] += weight * reward;
    for (auto& [key, entry] : cache_) {
      const double s = sum_at(u, entry.coords);
      entry.vinv_a.noalias() -= (gain * s) * u;
    }
    if (dense_) {
      vinv_.noalias() -= gain * u * u.transpose();
    } else {
      history_.push_back({u, gain});
    }
    observations_.push_back({coords, weight});
    log_det_ratio_ += std::log1p(weight * q);
    trace_ += weight * space_.agents;
    weight_sum_ += weight;
    ++update_count_;
  }

  /// Maintained V_t^{-1}; only valid in dense mode.
  const Eigen::MatrixXd& dense_inverse() const {
    if (!dense_) throw ContractViolation("dense_inverse() on a design without a dense inverse");
    return vinv_;
  }

  /// Explicit V_t^{-1}. Copy in dense mode, O(t (nd)^2) rebuild otherwise.
  Eigen::MatrixXd inverse() const {
    if (dense_) return vinv_;
    const int nd = space_.dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(nd, nd) / options_.lambda;
    for (const auto& h : history_) out.noalias() -= h.gain * h.u * h.u.transpose();
    return out;
  }

  /// Explicit V_t rebuilt from the recorded observations.
  Eigen::MatrixXd gram() const {
    const int nd = space_.dim();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(nd, nd) * options_.lambda;
    for (const auto& obs : observations_) {
      for (int r : obs.coords) {
        for (int c : obs.coords) v(r, c) += obs.weight;
      }
    }
    return v;
  }

 private:
  struct Entry {
    std::vector<int> coords;
    Eigen::VectorXd vinv_a;
  };
  struct HistoryItem {
    Eigen::VectorXd u;
    double gain;
  };
  struct Observation {
    std::vector<int> coords;
    double weight;
  };

  static double sum_at(const Eigen::VectorXd& v, const std::vector<int>& coords) {
    double s = 0.0;
    for (int c : coords) s += v[c];
    return s;
  }

  Eigen::VectorXd solve_uncached(const std::vector<int>& coords) const {
    const int nd = space_.dim();
    if (dense_) {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(nd);
      for (int c : coords) out += vinv_.col(c);
      return out;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nd);
    for (int c : coords) out[c] = 1.0 / options_.lambda;
    for (const auto& h : history_) {
      const double s = sum_at(h.u, coords);
      out.noalias() -= (h.gain * s) * h.u;
    }
    return out;
  }

  ActionSpace space_;
  DesignOptions options_;
  bool dense_ = false;
  Eigen::VectorXd theta_;
  Eigen::VectorXd m_accum_;
  double trace_ = 0.0;
  double weight_sum_ = 0.0;
  double log_det_ratio_ = 0.0;
  std::size_t update_count_ = 0;
  std::unordered_map<JointAction, Entry, JointActionHash> cache_;
  Eigen::MatrixXd vinv_;
  std::vector<HistoryItem> history_;
  std::vector<Observation> observations_;
};

}  // namespace linzero

#endif  // LINZERO_DESIGN_STATE_HPP
