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

#ifndef LINZERO_JOINT_ACTION_HPP
#define LINZERO_JOINT_ACTION_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "linzero/error.hpp"

namespace linzero {

/// n agents with d local actions each. A joint action is an n-hot vector of
/// length n*d: block i (positions [i*d, i*d + d)) holds agent i's choice.
struct ActionSpace {
  int agents = 1;
  int actions_per_agent = 1;

  int dim() const noexcept { return agents * actions_per_agent; }

  /// Flat position of (agent, local action) in the n-hot encoding.
  int coordinate(int agent, int local) const noexcept { return agent * actions_per_agent + local; }
  int block_of(int coordinate) const noexcept { return coordinate / actions_per_agent; }
  int local_of(int coordinate) const noexcept { return coordinate % actions_per_agent; }

  /// d^n, or 0 when it does not fit in 64 bits.
  std::uint64_t joint_count() const noexcept {
    std::uint64_t count = 1;
    for (int i = 0; i < agents; ++i) {
      if (count > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(actions_per_agent)) {
        return 0;
      }
      count *= static_cast<std::uint64_t>(actions_per_agent);
    }
    return count;
  }

  void check() const {
    if (agents < 1 || actions_per_agent < 1) {
      throw ConfigError("action space needs at least one agent and one action per agent");
    }
  }

  friend bool operator==(const ActionSpace&, const ActionSpace&) = default;
};

/// One local action index per agent. Ordering is lexicographic by agent,
/// which is the tie-break order used by every selector in the library.
class JointAction {
 public:
  JointAction() = default;
  explicit JointAction(std::vector<int> indices) : indices_(std::move(indices)) {}
  JointAction(std::initializer_list<int> indices) : indices_(indices) {}

  std::span<const int> indices() const noexcept { return indices_; }
  int operator[](std::size_t agent) const { return indices_[agent]; }
  int& operator[](std::size_t agent) { return indices_[agent]; }
  std::size_t agents() const noexcept { return indices_.size(); }

  friend auto operator<=>(const JointAction&, const JointAction&) = default;
  friend bool operator==(const JointAction&, const JointAction&) = default;

  /// "2-0-1" form used in result files and logs.
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) out += '-';
      out += std::to_string(indices_[i]);
    }
    return out;
  }

  static JointAction parse(std::string_view text) {
    std::vector<int> indices;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('-', pos), text.size());
      const std::string_view token = text.substr(pos, end - pos);
      if (token.empty()) throw InvalidAction("malformed joint action '" + std::string(text) + "'");
      int value = 0;
      for (char ch : token) {
        if (ch < '0' || ch > '9') throw InvalidAction("malformed joint action '" + std::string(text) + "'");
        value = value * 10 + (ch - '0');
      }
      indices.push_back(value);
      pos = end + 1;
    }
    return JointAction(std::move(indices));
  }

 private:
  std::vector<int> indices_;
};

inline void validate(const ActionSpace& space, const JointAction& action) {
  if (static_cast<int>(action.agents()) != space.agents) {
    throw InvalidAction("joint action has " + std::to_string(action.agents()) + " agents, space has " +
                        std::to_string(space.agents));
  }
  for (std::size_t i = 0; i < action.agents(); ++i) {
    if (action[i] < 0 || action[i] >= space.actions_per_agent) {
      throw InvalidAction("agent " + std::to_string(i) + " action index " + std::to_string(action[i]) +
                          " outside [0, " + std::to_string(space.actions_per_agent) + ")");
    }
  }
}

/// Dense n-hot encoding. Norm is exactly sqrt(n).
inline Eigen::VectorXd encode(const ActionSpace& space, const JointAction& action) {
  validate(space, action);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(space.dim());
  for (int i = 0; i < space.agents; ++i) v[space.coordinate(i, action[i])] = 1.0;
  return v;
}

/// Positions of the ones in the encoding, ascending.
inline std::vector<int> coordinates(const ActionSpace& space, const JointAction& action) {
  validate(space, action);
  std::vector<int> out(action.agents());
  for (int i = 0; i < space.agents; ++i) out[i] = space.coordinate(i, action[i]);
  return out;
}

/// Lexicographic rank -> action (agent 0 most significant).
inline JointAction decode_rank(const ActionSpace& space, std::uint64_t rank) {
  std::vector<int> indices(space.agents);
  for (int i = space.agents - 1; i >= 0; --i) {
    indices[i] = static_cast<int>(rank % static_cast<std::uint64_t>(space.actions_per_agent));
    rank /= static_cast<std::uint64_t>(space.actions_per_agent);
  }
  return JointAction(std::move(indices));
}

/// Advances to the lexicographic successor; returns false after the last one.
inline bool next_action(const ActionSpace& space, JointAction& action) {
  for (int i = space.agents - 1; i >= 0; --i) {
    if (++action[i] < space.actions_per_agent) return true;
    action[i] = 0;
  }
  return false;
}

struct JointActionHash {
  std::size_t operator()(const JointAction& a) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int x : a.indices()) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace linzero

#endif  // LINZERO_JOINT_ACTION_HPP
