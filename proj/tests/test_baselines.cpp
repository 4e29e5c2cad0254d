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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "linzero/bandit.hpp"
#include "linzero/baselines.hpp"
#include "linzero/experiment.hpp"
#include "linzero/matgame.hpp"

using namespace linzero;

TEST(Puct, ZeroVisitsScoreZero) { EXPECT_EQ(puct_score(0.0, 0.25, 0.0, 0.0, 1.3), 0.0); }

TEST(Puct, UnvisitedSiblingHasLargerExploration) {
  const double c = exploration_coefficient(9.0);
  EXPECT_GT(puct_score(0.5, 0.5, 9.0, 0.0, c), puct_score(0.5, 0.5, 9.0, 9.0, c));
  EXPECT_DOUBLE_EQ(puct_score(0.0, 0.5, 9.0, 0.0, c) / puct_score(0.0, 0.5, 9.0, 9.0, c), 10.0);
}

TEST(Puct, HandComputed) {
  const double c = 1.25 + std::log((40.0 + 19652.0 + 1.0) / 19652.0);
  EXPECT_DOUBLE_EQ(exploration_coefficient(40.0), c);
  EXPECT_DOUBLE_EQ(puct_score(0.3, 0.2, 40.0, 3.0, c), 0.3 + c * 0.2 * std::sqrt(40.0) / 4.0);
}

TEST(FlatUcb, Scores) {
  EXPECT_EQ(flat_ucb_score(0.0, 0.0, 10.0), std::numeric_limits<double>::infinity());
  EXPECT_GT(flat_ucb_score(1.0, 5.0, 10.0), flat_ucb_score(0.0, 5.0, 10.0));
  EXPECT_DOUBLE_EQ(flat_ucb_score(1.0, 4.0, 16.0), 1.0 + std::sqrt(2.0 * std::log(16.0) / 4.0));
}

TEST(FlatUcb, UnpulledArmsFirstInOrder) {
  FlatUcbBandit b({2, 2});
  for (std::uint64_t k = 0; k < 4; ++k) {
    const auto a = b.choose();
    EXPECT_EQ(a, decode_rank({2, 2}, k));
    b.observe(a, 0.0);
  }
}

TEST(Selector, ParseRoundTrip) {
  for (auto k : {SelectorKind::kLinUct, SelectorKind::kPuct, SelectorKind::kFlatUcb, SelectorKind::kRandom}) {
    EXPECT_EQ(parse_selector(to_string(k)), k);
  }
  EXPECT_THROW(parse_selector("ucb2"), ConfigError);
}

TEST(Bandit, LinUctBeatsFlatUcbOnNineArms) {
  // n = 2, d = 3, noise-free linear payoff, T = 1000, paired by seed.
  ExperimentConfig cfg;
  cfg.env.agents = 2;
  cfg.env.actions = 3;
  cfg.horizon = 1000;
  cfg.selectors = {SelectorKind::kLinUct, SelectorKind::kFlatUcb};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto lin = run_cell(cfg, seed, SelectorKind::kLinUct);
    const auto flat = run_cell(cfg, seed, SelectorKind::kFlatUcb);
    EXPECT_EQ(flat.back().action, (JointAction{2, 2}));
    EXPECT_EQ(lin.back().action, (JointAction{2, 2}));
    EXPECT_LT(lin.back().cum_regret, flat.back().cum_regret);
  }
}

TEST(Bandit, LinUctMeanReturnAtLeastFlatUcb) {
  ExperimentConfig cfg;
  cfg.env.agents = 4;
  cfg.env.actions = 5;
  cfg.env.mode = RewardMode::kNonlinear;
  cfg.env.noise_scale = cfg.env.unit_noise_scale();
  cfg.horizon = 2000;
  cfg.seeds = {1, 2, 3, 4};
  cfg.selectors = {SelectorKind::kLinUct, SelectorKind::kFlatUcb};
  ResultFile f{cfg, run_cells(cfg)};
  const auto rows = summarize({f});
  ASSERT_EQ(rows.size(), 2u);
  const auto& flat = rows[0].selector == "flat_ucb" ? rows[0] : rows[1];
  const auto& lin = rows[0].selector == "linuct" ? rows[0] : rows[1];
  EXPECT_GE(lin.mean, flat.mean);
}

TEST(Bandit, RandomAndPuctRun) {
  const ActionSpace space{2, 3};
  RandomBandit r(space, 4);
  PuctBandit p(space);
  for (int t = 0; t < 50; ++t) {
    const auto a = r.choose();
    validate(space, a);
    r.observe(a, 1.0);
    const auto b = p.choose();
    validate(space, b);
    p.observe(b, linear_reward(MatGameSpec{2, 3}, b));
  }
  EXPECT_TRUE(std::isnan(r.beta()));
}

TEST(Bandit, JointArmCapIsEnforced) { EXPECT_THROW(FlatUcbBandit({8, 10}), SizeError); }
