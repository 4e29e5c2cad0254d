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

#include <gtest/gtest.h>

#include "linzero/convex_loss.hpp"
#include "linzero/joint_action.hpp"
#include "linzero/prior.hpp"
#include "linzero/random.hpp"

using namespace linzero;

TEST(Encode, TwoAgentsThreeActions) {
  const Eigen::VectorXd v = encode({2, 3}, JointAction{0, 2});
  Eigen::VectorXd want(6);
  want << 1, 0, 0, 0, 0, 1;
  EXPECT_EQ(v, want);
}

TEST(Encode, SingleArm) {
  const Eigen::VectorXd v = encode({1, 1}, JointAction{0});
  ASSERT_EQ(v.size(), 1);
  EXPECT_EQ(v[0], 1.0);
}

TEST(Encode, NormIsSqrtAgents) {
  const Eigen::VectorXd v = encode({3, 2}, JointAction{1, 1, 0});
  EXPECT_DOUBLE_EQ(v.norm(), std::sqrt(3.0));
}

TEST(Encode, OneOnePerBlockForEveryAction) {
  const ActionSpace space{3, 4};
  JointAction a{0, 0, 0};
  do {
    const Eigen::VectorXd v = encode(space, a);
    EXPECT_EQ(v.squaredNorm(), 3.0);
    for (int b = 0; b < 3; ++b) EXPECT_EQ(v.segment(b * 4, 4).sum(), 1.0);
  } while (next_action(space, a));
}

TEST(Encode, RejectsOutOfRange) {
  EXPECT_THROW(encode({2, 3}, JointAction{0, 3}), InvalidAction);
  EXPECT_THROW(encode({2, 3}, JointAction{-1, 0}), InvalidAction);
  EXPECT_THROW(encode({2, 3}, JointAction{0}), InvalidAction);
}

TEST(JointActionText, RoundTrip) {
  const JointAction a{2, 0, 11};
  EXPECT_EQ(a.to_string(), "2-0-11");
  EXPECT_EQ(JointAction::parse("2-0-11"), a);
  EXPECT_THROW(JointAction::parse("2--1"), InvalidAction);
  EXPECT_THROW(JointAction::parse("x"), InvalidAction);
}

TEST(JointActionOrder, DecodeRankIsLexicographic) {
  const ActionSpace space{3, 3};
  JointAction a{0, 0, 0};
  std::uint64_t rank = 0;
  do {
    EXPECT_EQ(decode_rank(space, rank++), a);
  } while (next_action(space, a));
  EXPECT_EQ(rank, space.joint_count());
}

TEST(ActionSpace, JointCountOverflowIsZero) {
  EXPECT_EQ((ActionSpace{8, 10}.joint_count()), 100000000u);
  EXPECT_EQ((ActionSpace{100, 10}.joint_count()), 0u);
}

TEST(ConvexLoss, WeightBySign) {
  const ConvexLoss loss;
  EXPECT_EQ(loss.weight(0.5), 1.0);
  EXPECT_EQ(loss.weight(-0.5), 0.75);
  EXPECT_EQ(loss.weight(0.0), 1.0);
  EXPECT_EQ(loss.mu(), 1.0);
  EXPECT_EQ(loss.eps(), 0.75);
}

TEST(ConvexLoss, EqualCurvaturesIgnoreSign) {
  const ConvexLoss loss{0.5, 0.5};
  EXPECT_EQ(loss.weight(3.0), loss.weight(-3.0));
}

TEST(ConvexLoss, WeightWithinBounds) {
  Rng rng(7);
  for (int k = 0; k < 1000; ++k) {
    const ConvexLoss loss{rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0)};
    const double w = loss.weight(rng.normal());
    EXPECT_GE(w, loss.eps());
    EXPECT_LE(w, loss.mu());
    EXPECT_LE(loss.eps(), loss.mu());
  }
}

TEST(ConvexLoss, RejectsNonPositive) { EXPECT_THROW((ConvexLoss{0.0, 1.0}.check()), ConfigError); }

TEST(Rng, EngineIsStandardMt19937_64) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  Rng::result_type x = 0;
  for (int i = 0; i < 10000; ++i) x = rng();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Rng, StreamsDifferAndRepeat) {
  Rng a(11, Stream::kEnvironment), b(11, Stream::kEnvironment), c(11, Stream::kOracle);
  const double xa = a.uniform01();
  EXPECT_EQ(xa, b.uniform01());
  EXPECT_NE(xa, c.uniform01());
}

TEST(Rng, BelowAndUniformRanges) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rng.below(7), 7u);
    const double u = rng.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Prior, UniformProbabilityAndScale) {
  const auto p = PriorModel::uniform({2, 4});
  EXPECT_DOUBLE_EQ(p.probability(JointAction{1, 3}), 1.0 / 16);
  EXPECT_DOUBLE_EQ(p.geometric_scale(), 1.0 / 16);
}

TEST(Prior, NormalisesAndRejects) {
  const PriorModel p({{2.0, 2.0}, {1.0, 3.0}});
  EXPECT_DOUBLE_EQ(p.probability(JointAction{0, 1}), 0.5 * 0.75);
  EXPECT_THROW(PriorModel({{0.0, 0.0}}), ConfigError);
  EXPECT_THROW(PriorModel({{-1.0, 2.0}}), ConfigError);
  EXPECT_THROW(PriorModel(std::vector<std::vector<double>>{{}}), ConfigError);
}
