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

// Joint-action selection over the combinatorial n-hot space.
//
// The ground set is the nd (agent, local action) coordinates; a feasible set
// takes at most one coordinate per agent block (a partition matroid), and a
// complete feasible set is a joint action. Greedy builds the action one
// coordinate at a time by maximal marginal gain; brute force enumerates d^n
// actions and is the validation oracle.
//
// Two set functions are provided.
//
// CoordinateRadiusObjective follows the submodularity argument:
//   Psi(S) = sum_{v in S} theta+_v + k sum_{v in S} ||e_v||_{V(S)^{-1}},
//   V(S)   = V + sum_{v in S} e_v e_v^T,
// where theta+ = theta - min(theta) and k = c trace(V) times the prior scale.
// Only the |S| x |S| block B of V^{-1} on S matters:
//   V(S)^{-1} restricted to S = B (I + B)^{-1}.
// It is monotone and submodular on feasible sets, but each radius is capped
// below 1, so it under-weights exploration compared with the tree score.
//
// NodeScoreObjective evaluates the tree score on a partial action whose
// unassigned blocks are filled with their centroid 1/d:
//   Psi(S) = sum_{v in S} theta+_v + k sqrt(x_S^T V^{-1} x_S).
// Every x_S has unit mass per block, so like complete actions it is orthogonal
// to the directions where V = lambda I regardless of data. On complete
// actions it equals the tree score up to the rank-preserving theta shift.
// Dynamic node generation uses this one.

#ifndef LINZERO_ACTION_SELECT_HPP
#define LINZERO_ACTION_SELECT_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "linzero/design_state.hpp"
#include "linzero/error.hpp"
#include "linzero/joint_action.hpp"
#include "linzero/prior.hpp"

namespace linzero {

/// Immutable snapshot of everything a selection needs: theta, V^{-1} and the
/// exploration weight of each action. Copies the design, so it stays valid
/// while the tree keeps updating.
class SelectionObjective {
 public:
  /// Tree score a^T theta + c P(s,a) trace(V) ||a||_{V^{-1}}.
  static SelectionObjective tree(const DesignState& design, PriorModel prior, double c) {
    if (!prior.compatible(design.space())) throw ConfigError("prior shape does not match the action space");
    return SelectionObjective(design, std::move(prior), c * design.trace());
  }

  /// Ellipsoid score a^T theta + beta ||a||_{V^{-1}}.
  static SelectionObjective ellipsoid(const DesignState& design, double beta) {
    return SelectionObjective(design, std::nullopt, beta);
  }

  /// Same, from explicit parts (used by tests and synthetic instances).
  SelectionObjective(ActionSpace space, Eigen::VectorXd theta, Eigen::MatrixXd vinv,
                     std::optional<PriorModel> prior, double scale)
      : space_(space), theta_(std::move(theta)), vinv_(std::move(vinv)), prior_(std::move(prior)), scale_(scale) {
    space_.check();
    if (theta_.size() != space_.dim() || vinv_.rows() != space_.dim() || vinv_.cols() != space_.dim()) {
      throw ConfigError("selection objective dimensions do not match the action space");
    }
  }

  const ActionSpace& space() const noexcept { return space_; }
  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  const Eigen::MatrixXd& vinv() const noexcept { return vinv_; }
  double scale() const noexcept { return scale_; }
  const std::optional<PriorModel>& prior() const noexcept { return prior_; }

  /// Exploration multiplier of one complete action.
  double weight(const JointAction& action) const { return prior_ ? scale_ * prior_->probability(action) : scale_; }

  /// Single exploration multiplier used by the set functions.
  double set_weight() const { return prior_ ? scale_ * prior_->geometric_scale() : scale_; }

  double quad_form(const JointAction& action) const {
    const auto coords = coordinates(space_, action);
    double q = 0.0;
    for (int r : coords) {
      for (int c : coords) q += vinv_(r, c);
    }
    return q;
  }

  double linear(const JointAction& action) const {
    double s = 0.0;
    for (int c : coordinates(space_, action)) s += theta_[c];
    return s;
  }

  /// Tree (or ellipsoid) score of a complete action with the raw theta.
  double node_score(const JointAction& action) const {
    return linear(action) + weight(action) * std::sqrt(std::max(quad_form(action), 0.0));
  }

  /// Node score with theta shifted by -min(theta); differs from node_score by
  /// the constant n min(theta) and is non-negative.
  double shifted_node_score(const JointAction& action) const {
    return node_score(action) - space_.agents * theta_.minCoeff();
  }

 private:
  SelectionObjective(const DesignState& design, std::optional<PriorModel> prior, double scale)
      : SelectionObjective(design.space(), design.theta(), design.inverse(), std::move(prior), scale) {}

  ActionSpace space_;
  Eigen::VectorXd theta_;
  Eigen::MatrixXd vinv_;
  std::optional<PriorModel> prior_;
  double scale_ = 0.0;
};

/// Set function over coordinates with batched marginal gains.
template <class F>
concept CoordinateSetFunction = requires(const F& f, std::span<const int> selected) {
  { f.space() } -> std::convertible_to<ActionSpace>;
  { f.value(selected) } -> std::convertible_to<double>;
  { f.gains(selected) } -> std::convertible_to<std::vector<double>>;
};

namespace detail {

inline Eigen::VectorXd shifted_theta(const Eigen::VectorXd& theta, bool shift) {
  if (!shift || theta.size() == 0) return theta;
  return (theta.array() - theta.minCoeff()).matrix();
}

inline std::vector<bool> used_blocks(const ActionSpace& space, std::span<const int> selected) {
  std::vector<bool> used(space.agents, false);
  for (int v : selected) used[space.block_of(v)] = true;
  return used;
}

}  // namespace detail

class CoordinateRadiusObjective {
 public:
  explicit CoordinateRadiusObjective(const SelectionObjective& obj, bool shift_nonnegative = true)
      : obj_(&obj), theta_(detail::shifted_theta(obj.theta(), shift_nonnegative)), k_(obj.set_weight()) {}

  const ActionSpace& space() const noexcept { return obj_->space(); }

  double value(std::span<const int> selected) const {
    const auto m = static_cast<Eigen::Index>(selected.size());
    if (m == 0) return 0.0;
    Eigen::MatrixXd block(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) block(r, c) = obj_->vinv()(selected[r], selected[c]);
    }
    const Eigen::MatrixXd shrunk = block * (Eigen::MatrixXd::Identity(m, m) + block).inverse();
    double total = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      total += theta_[selected[r]] + k_ * std::sqrt(std::max(shrunk(r, r), 0.0));
    }
    return total;
  }

  std::vector<double> gains(std::span<const int> selected) const {
    const ActionSpace& sp = space();
    std::vector<double> out(sp.dim(), std::numeric_limits<double>::quiet_NaN());
    const auto used = detail::used_blocks(sp, selected);
    const double base = value(selected);
    std::vector<int> extended(selected.begin(), selected.end());
    extended.push_back(0);
    for (int v = 0; v < sp.dim(); ++v) {
      if (used[sp.block_of(v)]) continue;
      extended.back() = v;
      out[v] = value(extended) - base;
    }
    return out;
  }

 private:
  const SelectionObjective* obj_;
  Eigen::VectorXd theta_;
  double k_;
};

class NodeScoreObjective {
 public:
  explicit NodeScoreObjective(const SelectionObjective& obj, bool shift_nonnegative = true)
      : obj_(&obj), theta_(detail::shifted_theta(obj.theta(), shift_nonnegative)), k_(obj.set_weight()) {
    const ActionSpace& sp = space();
    const int d = sp.actions_per_agent;
    const Eigen::MatrixXd& vinv = obj.vinv();
    // Per coordinate v in block b: sum_j V^{-1}_{vj} over the block; per block: sum over the block square.
    row_block_sum_ = Eigen::VectorXd::Zero(sp.dim());
    block_sum_ = Eigen::VectorXd::Zero(sp.agents);
    for (int b = 0; b < sp.agents; ++b) {
      for (int i = 0; i < d; ++i) {
        const int v = sp.coordinate(b, i);
        for (int j = 0; j < d; ++j) row_block_sum_[v] += vinv(v, sp.coordinate(b, j));
        block_sum_[b] += row_block_sum_[v];
      }
    }
  }

  const ActionSpace& space() const noexcept { return obj_->space(); }

  double value(std::span<const int> selected) const {
    if (selected.empty()) return 0.0;
    const Eigen::VectorXd x = filled(selected);
    double lin = 0.0;
    for (int v : selected) lin += theta_[v];
    return lin + k_ * std::sqrt(std::max(x.dot(obj_->vinv() * x), 0.0));
  }

  std::vector<double> gains(std::span<const int> selected) const {
    const ActionSpace& sp = space();
    const int d = sp.actions_per_agent;
    const double inv_d = 1.0 / d;
    std::vector<double> out(sp.dim(), std::numeric_limits<double>::quiet_NaN());
    const auto used = detail::used_blocks(sp, selected);
    const Eigen::VectorXd x = filled(selected);
    const Eigen::VectorXd y = obj_->vinv() * x;
    const double base_q = std::max(x.dot(y), 0.0);
    // The empty set scores 0, not the centroid radius.
    const double base_radius = selected.empty() ? 0.0 : std::sqrt(base_q);
    for (int b = 0; b < sp.agents; ++b) {
      if (used[b]) continue;
      double y_block = 0.0;
      for (int j = 0; j < d; ++j) y_block += y[sp.coordinate(b, j)];
      for (int j = 0; j < d; ++j) {
        const int v = sp.coordinate(b, j);
        // x' = x + e_v - 1_b / d
        const double cross = y[v] - inv_d * y_block;
        const double self = obj_->vinv()(v, v) - 2.0 * inv_d * row_block_sum_[v] + inv_d * inv_d * block_sum_[b];
        const double q = std::max(base_q + 2.0 * cross + self, 0.0);
        out[v] = theta_[v] + k_ * (std::sqrt(q) - base_radius);
      }
    }
    return out;
  }

 private:
  Eigen::VectorXd filled(std::span<const int> selected) const {
    const ActionSpace& sp = space();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sp.dim());
    const auto used = detail::used_blocks(sp, selected);
    for (int v : selected) x[v] = 1.0;
    for (int b = 0; b < sp.agents; ++b) {
      if (used[b]) continue;
      for (int j = 0; j < sp.actions_per_agent; ++j) x[sp.coordinate(b, j)] = 1.0 / sp.actions_per_agent;
    }
    return x;
  }

  const SelectionObjective* obj_;
  Eigen::VectorXd theta_;
  double k_;
  Eigen::VectorXd row_block_sum_;
  Eigen::VectorXd block_sum_;
};

/// Allowed local actions per agent, ascending.
using Partition = std::vector<std::vector<int>>;

inline Partition full_partition(const ActionSpace& space) {
  Partition blocks(space.agents);
  for (auto& block : blocks) {
    block.resize(space.actions_per_agent);
    for (int j = 0; j < space.actions_per_agent; ++j) block[j] = j;
  }
  return blocks;
}

inline void check_partition(const ActionSpace& space, const Partition& blocks) {
  if (static_cast<int>(blocks.size()) != space.agents) {
    throw ContractViolation("partition has " + std::to_string(blocks.size()) + " blocks for " +
                            std::to_string(space.agents) + " agents");
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw ContractViolation("partition block " + std::to_string(b) + " is empty");
    for (int j : blocks[b]) {
      if (j < 0 || j >= space.actions_per_agent) throw InvalidAction("partition candidate out of range");
    }
    if (!std::is_sorted(blocks[b].begin(), blocks[b].end())) {
      throw ContractViolation("partition block " + std::to_string(b) + " must be sorted");
    }
  }
}

namespace detail {
/// Strictly better, with a relative tolerance so that values that only differ
/// by rounding resolve to the lexicographically first candidate.
inline bool strictly_better(double candidate, double incumbent) {
  return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}
}  // namespace detail

struct SelectResult {
  JointAction action;
  double value = 0.0;  // value of the objective that was maximised
};

/// Psi(partial + {candidate}) - Psi(partial).
template <CoordinateSetFunction F>
double marginal_gain(const F& f, std::span<const int> partial, int candidate) {
  const ActionSpace space = f.space();
  if (candidate < 0 || candidate >= space.dim()) throw InvalidAction("candidate coordinate out of range");
  for (int v : partial) {
    if (space.block_of(v) == space.block_of(candidate)) {
      throw ContractViolation("candidate coordinate shares a block with the partial selection");
    }
  }
  std::vector<int> extended(partial.begin(), partial.end());
  extended.push_back(candidate);
  return f.value(extended) - f.value(partial);
}

/// Block-wise greedy: n rounds, each adding the (agent, action) coordinate of
/// largest marginal gain among agents not yet assigned. Ties go to the lower
/// (agent, action) pair.
template <CoordinateSetFunction F>
SelectResult greedy_select(const F& f, const Partition& blocks) {
  const ActionSpace space = f.space();
  check_partition(space, blocks);
  std::vector<int> selected;
  selected.reserve(space.agents);
  std::vector<int> indices(space.agents, -1);
  for (int round = 0; round < space.agents; ++round) {
    const std::vector<double> gains = f.gains(selected);
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < space.agents; ++b) {
      if (indices[b] >= 0) continue;
      for (int j : blocks[b]) {
        const int v = space.coordinate(b, j);
        if (best < 0 || detail::strictly_better(gains[v], best_gain)) {
          best = v;
          best_gain = gains[v];
        }
      }
    }
    selected.push_back(best);
    indices[space.block_of(best)] = space.local_of(best);
  }
  return {JointAction(std::move(indices)), f.value(selected)};
}

template <CoordinateSetFunction F>
SelectResult greedy_select(const F& f) {
  return greedy_select(f, full_partition(f.space()));
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 100000;

/// Exact argmax of `score` over every joint action of the partition, visited
/// in lexicographic order so the first maximiser wins ties.
template <class Score>
  requires std::invocable<Score&, const JointAction&>
SelectResult brute_force_select(const ActionSpace& space, const Partition& blocks, Score&& score,
                                std::uint64_t cap = kDefaultEnumerationCap) {
  check_partition(space, blocks);
  std::uint64_t count = 1;
  for (const auto& block : blocks) {
    count *= block.size();  // count <= cap before each step, so no overflow
    if (count > cap) {
      throw SizeError("joint action count exceeds enumeration cap " + std::to_string(cap));
    }
  }
  std::vector<std::size_t> pos(space.agents, 0);
  JointAction current(std::vector<int>(space.agents));
  SelectResult best{{}, -std::numeric_limits<double>::infinity()};
  bool first = true;
  while (true) {
    for (int i = 0; i < space.agents; ++i) current[i] = blocks[i][pos[i]];
    const double value = score(current);
    if (first || detail::strictly_better(value, best.value)) {
      best = {current, value};
      first = false;
    }
    int i = space.agents - 1;
    while (i >= 0 && ++pos[i] == blocks[i].size()) pos[i--] = 0;
    if (i < 0) break;
  }
  return best;
}

/// Brute force over the tree score of `obj`.
inline SelectResult brute_force_select(const SelectionObjective& obj, const Partition& blocks,
                                       std::uint64_t cap = kDefaultEnumerationCap) {
  return brute_force_select(obj.space(), blocks, [&](const JointAction& a) { return obj.node_score(a); }, cap);
}

inline SelectResult brute_force_select(const SelectionObjective& obj, std::uint64_t cap = kDefaultEnumerationCap) {
  return brute_force_select(obj, full_partition(obj.space()), cap);
}

/// Brute force over a set function evaluated on complete actions.
template <CoordinateSetFunction F>
SelectResult brute_force_set_select(const F& f, const Partition& blocks, std::uint64_t cap = kDefaultEnumerationCap) {
  const ActionSpace space = f.space();
  return brute_force_select(space, blocks, [&](const JointAction& a) { return f.value(coordinates(space, a)); }, cap);
}

/// Which set function dynamic node generation maximises.
enum class GreedyObjective { kNodeScore, kCoordinateRadius };

}  // namespace linzero

#endif  // LINZERO_ACTION_SELECT_HPP
