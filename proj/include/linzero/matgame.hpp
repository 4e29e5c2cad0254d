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

// MatGame: a stateless n-agent matrix game with a shared payoff.
//
// Linear mode pays the sum of the chosen local action indices, so the
// optimum is every agent playing d - 1. Nonlinear mode adds u + v with
// u ~ N(0, sigma^2) and v ~ U(-h, h), drawn fresh on every query and
// multiplied by `noise_scale`. The noise is sqrt(sigma^2 + h^2)-subgaussian;
// noise_scale = 1 / sqrt(sigma^2 + h^2) makes it 1-subgaussian.

#ifndef LINZERO_MATGAME_HPP
#define LINZERO_MATGAME_HPP

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>

#include "linzero/error.hpp"
#include "linzero/ini.hpp"
#include "linzero/joint_action.hpp"
#include "linzero/random.hpp"

namespace linzero {

enum class RewardMode { kLinear, kNonlinear };

inline std::string to_string(RewardMode mode) { return mode == RewardMode::kLinear ? "linear" : "nonlinear"; }

inline RewardMode parse_reward_mode(const std::string& text) {
  if (text == "linear") return RewardMode::kLinear;
  if (text == "nonlinear") return RewardMode::kNonlinear;
  throw ConfigError("reward mode must be 'linear' or 'nonlinear', got '" + text + "'");
}

struct MatGameSpec {
  int agents = 2;
  int actions = 3;
  RewardMode mode = RewardMode::kLinear;
  double noise_gauss_sigma = 2.0;
  double noise_uniform_halfwidth = 3.0;
  double noise_scale = 1.0;
  std::uint64_t seed = 0;
  int episode_length = 1;

  ActionSpace space() const { return {agents, actions}; }

  /// noise_scale value that makes the noise 1-subgaussian.
  double unit_noise_scale() const {
    return 1.0 / std::sqrt(noise_gauss_sigma * noise_gauss_sigma + noise_uniform_halfwidth * noise_uniform_halfwidth);
  }

  /// Variance of one noise draw.
  double noise_variance() const {
    if (mode == RewardMode::kLinear) return 0.0;
    const double h = noise_uniform_halfwidth;
    return noise_scale * noise_scale * (noise_gauss_sigma * noise_gauss_sigma + h * h / 3.0);
  }

  void check() const {
    if (agents < 1 || actions < 1) throw ConfigError("MatGame needs agents >= 1 and actions >= 1");
    if (episode_length < 1) throw ConfigError("MatGame episode_length must be >= 1");
    if (!(noise_gauss_sigma >= 0.0) || !(noise_uniform_halfwidth >= 0.0) || !(noise_scale >= 0.0)) {
      throw ConfigError("MatGame noise parameters must be non-negative");
    }
  }

  friend bool operator==(const MatGameSpec&, const MatGameSpec&) = default;
};

/// Noise-free payoff: the sum of the agents' chosen action indices.
inline double linear_reward(const MatGameSpec& spec, const JointAction& action) {
  validate(spec.space(), action);
  double total = 0.0;
  for (int index : action.indices()) total += index;
  return total;
}

inline double sample_noise(const MatGameSpec& spec, Rng& rng) {
  if (spec.mode == RewardMode::kLinear) return 0.0;
  const double u = rng.normal(0.0, spec.noise_gauss_sigma);
  const double v = rng.uniform(-spec.noise_uniform_halfwidth, spec.noise_uniform_halfwidth);
  return spec.noise_scale * (u + v);
}

inline double reward(const MatGameSpec& spec, const JointAction& action, Rng& rng) {
  return linear_reward(spec, action) + sample_noise(spec, rng);
}

struct Optimum {
  JointAction action;
  double value = 0.0;
};

/// Per-agent argmax of the linear payoff and its expected value. Noise has
/// zero mean, so this is the optimum in both modes.
inline Optimum oracle_optimum(const MatGameSpec& spec) {
  spec.check();
  JointAction best(std::vector<int>(spec.agents, spec.actions - 1));
  return {best, static_cast<double>(spec.agents) * (spec.actions - 1)};
}

/// Episodic wrapper. The only state is the step counter; the reference
/// (optimal-action) reward used for realized regret is drawn from its own
/// stream, so the environment stream is independent of the actions chosen.
class MatGame {
 public:
  struct StepResult {
    double reward = 0.0;
    bool done = false;
  };

  explicit MatGame(MatGameSpec spec)
      : spec_(std::move(spec)), noise_(spec_.seed, Stream::kEnvironment), reference_(spec_.seed, Stream::kOracle) {
    spec_.check();
  }

  const MatGameSpec& spec() const noexcept { return spec_; }
  int step_count() const noexcept { return steps_; }
  bool done() const noexcept { return steps_ >= spec_.episode_length; }
  void reset() { steps_ = 0; }

  StepResult step(const JointAction& action) {
    if (done()) throw ProtocolError("MatGame step after the episode finished; call reset()");
    validate(spec_.space(), action);
    // Draw before evaluating so the noise sequence does not depend on the action.
    const double noise = sample_noise(spec_, noise_);
    ++steps_;
    return {linear_reward(spec_, action) + noise, done()};
  }

  /// Sampled reward of the optimal action at the current step.
  double sample_reference() {
    const Optimum opt = oracle_optimum(spec_);
    return opt.value + sample_noise(spec_, reference_);
  }

 private:
  MatGameSpec spec_;
  Rng noise_;
  Rng reference_;
  int steps_ = 0;
};

/// Ground-truth planning model: the same payoff with fresh noise per query.
/// States beyond `remaining` steps are terminal.
class MatGameModel {
 public:
  explicit MatGameModel(MatGameSpec spec, int remaining = 1) : spec_(std::move(spec)), remaining_(remaining) {
    spec_.check();
  }

  ActionSpace space() const { return spec_.space(); }
  double sample_reward(const JointAction& action, int /*depth*/, Rng& rng) const { return reward(spec_, action, rng); }
  bool terminal(int depth) const { return depth >= remaining_; }

 private:
  MatGameSpec spec_;
  int remaining_;
};

inline MatGameSpec read_matgame_section(IniSection env) {
  MatGameSpec spec;
  spec.agents = env.get<int>("agents", spec.agents);
  spec.actions = env.get<int>("actions", spec.actions);
  spec.mode = parse_reward_mode(env.get_string("mode", to_string(spec.mode)));
  spec.noise_gauss_sigma = env.get<double>("noise_gauss_sigma", spec.noise_gauss_sigma);
  spec.noise_uniform_halfwidth = env.get<double>("noise_uniform_halfwidth", spec.noise_uniform_halfwidth);
  const std::string scale = env.get_string("noise_scale", "1");
  spec.seed = env.get<std::uint64_t>("seed", spec.seed);
  spec.episode_length = env.get<int>("episode_length", spec.episode_length);
  if (scale == "unit") {
    spec.noise_scale = spec.unit_noise_scale();
  } else {
    try {
      std::size_t used = 0;
      spec.noise_scale = std::stod(scale, &used);
      if (used != scale.size()) throw std::invalid_argument(scale);
    } catch (const std::exception&) {
      throw ConfigError("[env] noise_scale must be a number or 'unit', got '" + scale + "'");
    }
  }
  env.reject_unknown();
  spec.check();
  return spec;
}

/// Reads the [env] section of a key = value file.
inline MatGameSpec read_matgame_spec(const std::string& path) {
  const IniTree tree = read_ini_file(path);
  reject_unknown_sections(tree, {"env"});
  return read_matgame_section(section(tree, "env"));
}

inline void write_matgame_spec(std::ostream& out, const MatGameSpec& spec) {
  std::ostringstream scale;
  scale.precision(17);
  scale << spec.noise_scale;
  out << "[env]\n"
      << "agents = " << spec.agents << "\n"
      << "actions = " << spec.actions << "\n"
      << "mode = " << to_string(spec.mode) << "\n"
      << "noise_gauss_sigma = " << spec.noise_gauss_sigma << "\n"
      << "noise_uniform_halfwidth = " << spec.noise_uniform_halfwidth << "\n"
      << "noise_scale = " << scale.str() << "\n"
      << "seed = " << spec.seed << "\n"
      << "episode_length = " << spec.episode_length << "\n";
}

/// Expected payoff of every joint action, one row per action in lexicographic
/// order: a0,...,a{n-1},expected_reward.
inline void dump_reward_tensor(std::ostream& out, const MatGameSpec& spec, std::uint64_t cap = 100000) {
  const ActionSpace space = spec.space();
  const std::uint64_t count = space.joint_count();
  if (count == 0 || count > cap) throw SizeError("reward tensor larger than cap " + std::to_string(cap));
  for (int i = 0; i < space.agents; ++i) out << 'a' << i << ',';
  out << "expected_reward\n";
  JointAction action(std::vector<int>(space.agents, 0));
  do {
    for (int index : action.indices()) out << index << ',';
    out << linear_reward(spec, action) << '\n';
  } while (next_action(space, action));
}

}  // namespace linzero

#endif  // LINZERO_MATGAME_HPP
