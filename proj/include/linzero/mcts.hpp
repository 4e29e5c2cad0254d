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

// Search tree over joint actions.
//
// One simulation walks from the root, at each node
//   - expanding it on first arrival (kappa = floor(zeta chi) sampled children
//     for LinUCT, chi for the count-based selectors),
//   - selecting a child,
//   - querying the model for the reward of that child,
// until the depth limit, a terminal model state or a newly created leaf.
// Back-up then runs leaf to root, accumulating
//   G_k = X_k + gamma G_{k+1},  G_l = leaf value,
// into N and the value sum of each traversed child, and (LinUCT) feeding
// (a, X_k, w) into the node's DesignState with w = f''+ if X_k > Q(s,a) and
// f''- otherwise.
//
// LinUCT selection at a node:
//   1. an expanded child that was never visited is taken first;
//   2. under capacity, dynamic node generation maximises the tree score over
//      the whole joint space by greedy coordinate selection and adds the
//      result as a child when it is new;
//   3. at capacity, the child of largest tree score is taken.

#ifndef LINZERO_MCTS_HPP
#define LINZERO_MCTS_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "linzero/action_select.hpp"
#include "linzero/baselines.hpp"
#include "linzero/convex_loss.hpp"
#include "linzero/design_state.hpp"
#include "linzero/error.hpp"
#include "linzero/joint_action.hpp"
#include "linzero/linuct.hpp"
#include "linzero/prior.hpp"
#include "linzero/random.hpp"

namespace linzero {

/// Regression target fed to the node designs during back-up.
enum class DesignTarget { kReward, kReturn };

struct SearchConfig {
  int num_simulations = 50;
  int chi = 3;
  double zeta = 0.6;
  double gamma = 0.99;
  double c1 = 1.25;
  double c2 = 19652.0;
  /// When >= 0, replaces the c(s) schedule by this constant.
  double c_fixed = -1.0;
  ConvexLoss loss{};
  double lambda = 1e-4;
  /// Accepted for compatibility with learned-value setups; unused.
  double value_quantile = 0.75;
  double decay_lambda = 0.8;
  int max_depth = 1;
  GreedyObjective dng_objective = GreedyObjective::kNodeScore;
  DesignTarget design_target = DesignTarget::kReward;
  bool normalize_q = false;
  bool record_backups = false;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  int kappa() const { return static_cast<int>(std::floor(zeta * chi + 1e-9)); }

  double coefficient(double total_visits) const {
    return c_fixed >= 0.0 ? c_fixed : exploration_coefficient(total_visits, c1, c2);
  }

  void check() const {
    if (num_simulations < 1) throw ConfigError("num_simulations must be >= 1");
    if (chi < 1) throw ConfigError("chi must be >= 1");
    if (!(zeta > 0.0 && zeta <= 1.0)) throw ConfigError("zeta must lie in (0, 1]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
    if (!(c2 > 0.0)) throw ConfigError("c2 must be positive");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
    loss.check();
  }
};

template <class M>
concept PlanningModel = requires(const M& m, const JointAction& a, int depth, Rng& rng) {
  { m.space() } -> std::convertible_to<ActionSpace>;
  { m.sample_reward(a, depth, rng) } -> std::convertible_to<double>;
  { m.terminal(depth) } -> std::convertible_to<bool>;
};

struct Child {
  JointAction action;
  double prior = 0.0;
  int visits = 0;
  double value_sum = 0.0;
  int node = -1;

  /// Mean backed-up return; 0 before the first visit.
  double q() const { return visits > 0 ? value_sum / visits : 0.0; }
};

struct SearchNode {
  SearchNode(int depth_, const ActionSpace& space, double lambda)
      : depth(depth_), design(space, DesignOptions{lambda}) {}

  int depth = 0;
  bool expanded = false;
  int total_visits = 0;
  std::vector<Child> children;
  std::unordered_map<JointAction, int, JointActionHash> index;
  DesignState design;

  int find(const JointAction& action) const {
    const auto it = index.find(action);
    return it == index.end() ? -1 : it->second;
  }
};

struct PathStep {
  int node = 0;
  int child = 0;
  JointAction action;
  double reward = 0.0;
  int depth = 0;
  double weight = 0.0;
  double ret = 0.0;  // G at this step, filled by back-up
};

struct BackupRecord {
  std::vector<PathStep> path;
  double leaf_value = 0.0;
  int search_depth = 0;
};

/// G at path position k recomputed from the record:
///   sum_{tau} gamma^tau X_{k+tau} + gamma^{l-k} v^l.
inline double discounted_return(const BackupRecord& record, std::size_t k, double gamma) {
  double g = record.leaf_value;
  for (std::size_t j = record.path.size(); j-- > k;) g = record.path[j].reward + gamma * g;
  return g;
}

struct ChildStat {
  JointAction action;
  int visits = 0;
  double value_sum = 0.0;
  double prior = 0.0;
};

struct SearchStatistics {
  JointAction action;
  int simulations = 0;
  std::vector<ChildStat> root;
  std::vector<BackupRecord> backups;
};

class SearchTree {
 public:
  SearchTree(ActionSpace space, SearchConfig config, SelectorKind selector, std::uint64_t seed,
             std::optional<PriorModel> prior = std::nullopt)
      : space_(space),
        config_(config),
        selector_(selector),
        prior_(prior ? std::move(*prior) : PriorModel::uniform(space)),
        selector_rng_(seed, Stream::kSelector),
        model_rng_(seed, Stream::kModel) {
    space_.check();
    config_.check();
    if (!prior_.compatible(space_)) throw ConfigError("prior shape does not match the action space");
    nodes_.emplace_back(0, space_, config_.lambda);
  }

  const ActionSpace& space() const noexcept { return space_; }
  const SearchConfig& config() const noexcept { return config_; }
  SelectorKind selector() const noexcept { return selector_; }
  const std::vector<SearchNode>& nodes() const noexcept { return nodes_; }
  const SearchNode& root() const { return nodes_.front(); }
  int simulations() const noexcept { return simulations_; }
  const std::vector<BackupRecord>& backups() const noexcept { return backups_; }

  /// Samples the initial children of a node.
  void expand(int node_id) {
    SearchNode& node = nodes_.at(node_id);
    if (node.expanded) return;
    node.expanded = true;
    int want = selector_ == SelectorKind::kLinUct ? config_.kappa() : config_.chi;
    const std::uint64_t count = space_.joint_count();
    if (count != 0 && count < static_cast<std::uint64_t>(want)) want = static_cast<int>(count);
    std::vector<JointAction> drawn;
    for (int attempt = 0; static_cast<int>(drawn.size()) < want && attempt < 64 * want; ++attempt) {
      JointAction a = prior_.sample(selector_rng_);
      if (std::find(drawn.begin(), drawn.end(), a) == drawn.end()) drawn.push_back(std::move(a));
    }
    for (auto& a : drawn) {
      // Count-based selectors get the empirical sampling prior, uniform over the sample.
      const double p = selector_ == SelectorKind::kLinUct ? prior_.probability(a) : 1.0 / drawn.size();
      add_child(node_id, std::move(a), p);
    }
  }

  /// Greedy maximisation of the tree score over the full joint space. Adds the
  /// result as a child if it is new and returns its child index.
  int dynamic_node_generation(int node_id) {
    SearchNode& node = nodes_.at(node_id);
    if (static_cast<int>(node.children.size()) >= config_.chi) {
      throw ContractViolation("dynamic node generation at a node already holding chi children");
    }
    const double c = config_.coefficient(node.total_visits);
    const SelectionObjective obj = SelectionObjective::tree(node.design, prior_, c);
    const SelectResult picked = config_.dng_objective == GreedyObjective::kNodeScore
                                    ? greedy_select(NodeScoreObjective(obj))
                                    : greedy_select(CoordinateRadiusObjective(obj));
    const int existing = node.find(picked.action);
    if (existing >= 0) return existing;
    const double p = prior_.probability(picked.action);
    return add_child(node_id, picked.action, p);
  }

  /// Child index chosen at an expanded node.
  int select(int node_id) {
    const SearchNode& node = nodes_.at(node_id);
    if (!node.expanded) throw ContractViolation("select on a node that was never expanded");
    switch (selector_) {
      case SelectorKind::kLinUct: {
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          if (node.children[i].visits == 0) return static_cast<int>(i);
        }
        if (static_cast<int>(node.children.size()) < config_.chi) return dynamic_node_generation(node_id);
        const double c = config_.coefficient(node.total_visits);
        return argmax_child(node, [&](const Child& ch) { return ucb_score(node.design, ch.action, ch.prior, c); });
      }
      case SelectorKind::kPuct: {
        const double c = config_.coefficient(node.total_visits);
        return argmax_child(node, [&](const Child& ch) {
          const double q = config_.normalize_q && ch.visits > 0 ? minmax_.normalize(ch.q()) : ch.q();
          return puct_score(q, ch.prior, node.total_visits, ch.visits, c);
        });
      }
      case SelectorKind::kFlatUcb:
        return argmax_child(node, [&](const Child& ch) { return flat_ucb_score(ch.q(), ch.visits, node.total_visits); });
      case SelectorKind::kRandom:
        if (node.children.empty()) throw ContractViolation("random selection at a node without children");
        return static_cast<int>(selector_rng_.below(node.children.size()));
    }
    return 0;
  }

  /// Leaf-to-root update of N, value sums and node designs.
  void backpropagate(BackupRecord& record) {
    if (record.path.empty()) throw ContractViolation("back-up of an empty path");
    double g = record.leaf_value;
    for (std::size_t k = record.path.size(); k-- > 0;) {
      PathStep& step = record.path[k];
      if (!std::isfinite(step.reward)) throw NumericError("non-finite reward in back-up");
      g = step.reward + config_.gamma * g;
      SearchNode& node = nodes_.at(step.node);
      Child& child = node.children.at(step.child);
      const double w = step.reward > child.q() ? config_.loss.curvature_under : config_.loss.curvature_over;
      child.value_sum += g;
      child.visits += 1;
      node.total_visits += 1;
      minmax_.observe(child.q());
      if (selector_ == SelectorKind::kLinUct) {
        node.design.update(child.action, config_.design_target == DesignTarget::kReward ? step.reward : g, w);
      }
      step.weight = w;
      step.ret = g;
    }
  }

  template <PlanningModel M>
  void simulate(const M& model) {
    BackupRecord record;
    int node_id = 0;
    int depth = 0;
    while (true) {
      expand(node_id);
      const int ci = select(node_id);
      const JointAction action = nodes_[node_id].children[ci].action;
      const double x = model.sample_reward(action, depth, model_rng_);
      record.path.push_back({node_id, ci, action, x, depth, 0.0, 0.0});
      ++depth;
      if (depth >= config_.max_depth || model.terminal(depth)) break;
      int next = nodes_[node_id].children[ci].node;
      if (next < 0) {
        next = static_cast<int>(nodes_.size());
        nodes_.emplace_back(depth, space_, config_.lambda);
        nodes_[node_id].children[ci].node = next;
        expand(next);
        break;
      }
      node_id = next;
    }
    record.leaf_value = 0.0;
    record.search_depth = depth;
    backpropagate(record);
    ++simulations_;
    if (config_.record_backups) backups_.push_back(std::move(record));
  }

  /// Most visited root child; ties by larger Q, then smaller action.
  JointAction best_root_action() const {
    const SearchNode& r = root();
    if (r.children.empty()) throw ContractViolation("root has no children");
    const Child* best = &r.children.front();
    for (const Child& ch : r.children) {
      if (ch.visits != best->visits) {
        if (ch.visits > best->visits) best = &ch;
      } else if (ch.q() != best->q()) {
        if (ch.q() > best->q()) best = &ch;
      } else if (ch.action < best->action) {
        best = &ch;
      }
    }
    return best->action;
  }

  SearchStatistics statistics() const {
    SearchStatistics stats;
    stats.action = best_root_action();
    stats.simulations = simulations_;
    for (const Child& ch : root().children) stats.root.push_back({ch.action, ch.visits, ch.value_sum, ch.prior});
    stats.backups = backups_;
    return stats;
  }

 private:
  int add_child(int node_id, JointAction action, double prior) {
    SearchNode& node = nodes_[node_id];
    const int id = static_cast<int>(node.children.size());
    node.design.register_candidate(action);
    node.index.emplace(action, id);
    node.children.push_back({std::move(action), prior, 0, 0.0, -1});
    return id;
  }

  /// Highest score; near-ties go to the lexicographically smaller action.
  template <class Score>
  static int argmax_child(const SearchNode& node, Score&& score) {
    if (node.children.empty()) throw ContractViolation("selection at a node without children");
    int best = 0;
    double best_score = score(node.children[0]);
    for (int i = 1; i < static_cast<int>(node.children.size()); ++i) {
      const double s = score(node.children[i]);
      if (detail::strictly_better(s, best_score) ||
          (!detail::strictly_better(best_score, s) && node.children[i].action < node.children[best].action)) {
        best = i;
        best_score = s;
      }
    }
    return best;
  }

  ActionSpace space_;
  SearchConfig config_;
  SelectorKind selector_;
  PriorModel prior_;
  Rng selector_rng_;
  Rng model_rng_;
  std::vector<SearchNode> nodes_;
  MinMax minmax_;
  int simulations_ = 0;
  std::vector<BackupRecord> backups_;
};

/// Runs num_simulations simulations from a fresh root.
template <PlanningModel M>
SearchStatistics plan(const M& model, const SearchConfig& config, SelectorKind selector, std::uint64_t seed,
                      std::optional<PriorModel> prior = std::nullopt) {
  SearchTree tree(model.space(), config, selector, seed, std::move(prior));
  for (int s = 0; s < config.num_simulations; ++s) tree.simulate(model);
  return tree.statistics();
}

inline nlohmann::json to_json(const SearchStatistics& stats) {
  nlohmann::json j;
  j["action"] = stats.action.to_string();
  j["simulations"] = stats.simulations;
  j["root"] = nlohmann::json::array();
  for (const auto& c : stats.root) {
    j["root"].push_back({{"action", c.action.to_string()}, {"visits", c.visits}, {"value_sum", c.value_sum},
                         {"prior", c.prior}});
  }
  j["backups"] = nlohmann::json::array();
  for (const auto& b : stats.backups) {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& s : b.path) {
      path.push_back({{"node", s.node}, {"child", s.child}, {"action", s.action.to_string()}, {"reward", s.reward},
                      {"depth", s.depth}, {"weight", s.weight}, {"return", s.ret}});
    }
    j["backups"].push_back({{"leaf_value", b.leaf_value}, {"search_depth", b.search_depth}, {"path", path}});
  }
  return j;
}

inline SearchStatistics statistics_from_json(const nlohmann::json& j) {
  SearchStatistics stats;
  try {
    stats.action = JointAction::parse(j.at("action").get<std::string>());
    stats.simulations = j.at("simulations").get<int>();
    for (const auto& c : j.at("root")) {
      stats.root.push_back({JointAction::parse(c.at("action").get<std::string>()), c.at("visits").get<int>(),
                            c.at("value_sum").get<double>(), c.at("prior").get<double>()});
    }
    for (const auto& b : j.at("backups")) {
      BackupRecord rec;
      rec.leaf_value = b.at("leaf_value").get<double>();
      rec.search_depth = b.at("search_depth").get<int>();
      for (const auto& s : b.at("path")) {
        rec.path.push_back({s.at("node").get<int>(), s.at("child").get<int>(),
                            JointAction::parse(s.at("action").get<std::string>()), s.at("reward").get<double>(),
                            s.at("depth").get<int>(), s.at("weight").get<double>(), s.at("return").get<double>()});
      }
      stats.backups.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed search statistics record: ") + e.what());
  }
  return stats;
}

/// One JSON object per line.
inline void write_statistics(std::ostream& out, const SearchStatistics& stats) { out << to_json(stats).dump() << '\n'; }

inline std::vector<SearchStatistics> read_statistics(std::istream& in) {
  std::vector<SearchStatistics> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("malformed search statistics line: ") + e.what());
    }
    out.push_back(statistics_from_json(j));
  }
  return out;
}

}  // namespace linzero

#endif  // LINZERO_MCTS_HPP
