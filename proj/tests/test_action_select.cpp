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
#include <vector>

#include <gtest/gtest.h>

#include "linzero/action_select.hpp"
#include "oracles.hpp"

using namespace linzero;

namespace {

SelectionObjective make_objective(const ActionSpace& space, Rng& rng, double c = 1.0) {
  auto inst = oracle::random_instance(space, rng);
  return SelectionObjective(space, inst.theta, inst.vinv, PriorModel::uniform(space), c * inst.trace);
}

/// Random partial actions S subset of T plus a coordinate a from a block T leaves free.
struct Triple {
  std::vector<int> s, t;
  int a;
};

Triple random_triple(const ActionSpace& space, Rng& rng) {
  std::vector<int> blocks(space.agents);
  for (int b = 0; b < space.agents; ++b) blocks[b] = b;
  for (int i = space.agents - 1; i > 0; --i) std::swap(blocks[i], blocks[rng.below(i + 1)]);
  const int t_size = static_cast<int>(rng.below(space.agents));  // leaves at least one block free
  const int s_size = static_cast<int>(rng.below(t_size + 1));
  Triple tr;
  for (int k = 0; k < t_size; ++k) {
    const int v = space.coordinate(blocks[k], static_cast<int>(rng.below(space.actions_per_agent)));
    tr.t.push_back(v);
    if (k < s_size) tr.s.push_back(v);
  }
  tr.a = space.coordinate(blocks[t_size], static_cast<int>(rng.below(space.actions_per_agent)));
  return tr;
}

}  // namespace

TEST(Greedy, SingleBlockIsExact) {
  Rng rng(1, Stream::kInstance);
  for (int k = 0; k < 50; ++k) {
    const auto obj = make_objective({1, 4}, rng);
    const auto g = greedy_select(NodeScoreObjective(obj));
    const auto b = brute_force_select(obj);
    EXPECT_EQ(g.action, b.action);
  }
}

TEST(Greedy, SeparableInstancePicksPerAgentArgmax) {
  Rng rng(2, Stream::kInstance);
  for (int k = 0; k < 30; ++k) {
    const ActionSpace space{1 + static_cast<int>(rng.below(4)), 1 + static_cast<int>(rng.below(4))};
    Eigen::VectorXd theta(space.dim());
    for (int i = 0; i < space.dim(); ++i) theta[i] = rng.uniform(-2.0, 2.0);
    const Eigen::MatrixXd vinv = Eigen::MatrixXd::Identity(space.dim(), space.dim()) * 0.5;
    const SelectionObjective obj(space, theta, vinv, PriorModel::uniform(space), 1.0);
    std::vector<int> want(space.agents);
    for (int b = 0; b < space.agents; ++b) {
      int best = 0;
      for (int j = 1; j < space.actions_per_agent; ++j) {
        if (theta[space.coordinate(b, j)] > theta[space.coordinate(b, best)]) best = j;
      }
      want[b] = best;
    }
    EXPECT_EQ(greedy_select(NodeScoreObjective(obj)).action, JointAction(want));
    EXPECT_EQ(brute_force_select(obj).action, JointAction(want));
  }
}

TEST(Greedy, ApproximationOnRandomInstances) {
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  Rng rng(3, Stream::kInstance);
  for (int k = 0; k < 200; ++k) {
    const ActionSpace space{3, 3};
    const auto obj = make_objective(space, rng);
    const CoordinateRadiusObjective psi(obj);
    const double g = greedy_select(psi).value;
    const double opt = brute_force_set_select(psi, full_partition(space)).value;
    EXPECT_GE(g, bound * opt) << "instance " << k;
    EXPECT_LE(g, opt + 1e-9);
    // Node-score greedy against the exact argmax of the shifted tree score.
    const NodeScoreObjective node(obj);
    const double gn = obj.shifted_node_score(greedy_select(node).action);
    const double on = obj.shifted_node_score(brute_force_select(obj).action);
    EXPECT_LE(gn, on + 1e-9 * std::max(1.0, on));
  }
}

TEST(BruteForce, PureLinearTerm) {
  const ActionSpace space{2, 2};
  Eigen::VectorXd theta(4);
  theta << 1, 0, 0, 2;
  const SelectionObjective obj(space, theta, Eigen::MatrixXd::Identity(4, 4), PriorModel::uniform(space), 0.0);
  const auto r = brute_force_select(obj);
  EXPECT_EQ(r.action, (JointAction{0, 1}));
  EXPECT_DOUBLE_EQ(r.value, 3.0);
}

TEST(BruteForce, TiesGoToLexicographicFirst) {
  const ActionSpace space{3, 3};
  DesignState d(space);
  const auto obj = SelectionObjective::tree(d, PriorModel::uniform(space), 1.0);
  EXPECT_EQ(brute_force_select(obj).action, (JointAction{0, 0, 0}));
  EXPECT_EQ(greedy_select(NodeScoreObjective(obj)).action, (JointAction{0, 0, 0}));
  EXPECT_EQ(greedy_select(CoordinateRadiusObjective(obj)).action, (JointAction{0, 0, 0}));
}

TEST(BruteForce, RefusesAboveCap) {
  const ActionSpace space{6, 10};
  DesignState d(space);
  const auto obj = SelectionObjective::tree(d, PriorModel::uniform(space), 1.0);
  EXPECT_THROW(brute_force_select(obj), SizeError);
  EXPECT_NO_THROW(brute_force_select(obj, 1000000));
}

TEST(BruteForce, NeverBelowGreedy) {
  Rng rng(4, Stream::kInstance);
  for (int k = 0; k < 100; ++k) {
    const ActionSpace space{1 + static_cast<int>(rng.below(4)), 1 + static_cast<int>(rng.below(4))};
    const auto obj = make_objective(space, rng);
    const double g = obj.node_score(greedy_select(NodeScoreObjective(obj)).action);
    EXPECT_GE(brute_force_select(obj).value, g - 1e-9 * std::max(1.0, std::abs(g)));
  }
}

TEST(Partition, RestrictedBlocks) {
  const ActionSpace space{2, 4};
  Rng rng(5, Stream::kInstance);
  const auto obj = make_objective(space, rng);
  const Partition blocks{{1, 3}, {0}};
  const auto g = greedy_select(NodeScoreObjective(obj), blocks);
  EXPECT_TRUE(g.action[0] == 1 || g.action[0] == 3);
  EXPECT_EQ(g.action[1], 0);
  EXPECT_THROW(greedy_select(NodeScoreObjective(obj), Partition{{1}, {}}), ContractViolation);
  EXPECT_THROW(brute_force_select(obj, Partition{{}, {0}}), ContractViolation);
}

TEST(MarginalGain, EmptyPartialIsNonNegative) {
  Rng rng(6, Stream::kInstance);
  for (int k = 0; k < 100; ++k) {
    const ActionSpace space{3, 3};
    const auto obj = make_objective(space, rng);
    const CoordinateRadiusObjective psi(obj);
    for (int v = 0; v < space.dim(); ++v) EXPECT_GE(marginal_gain(psi, std::vector<int>{}, v), 0.0);
  }
}

TEST(MarginalGain, SameBlockIsRejected) {
  Rng rng(7, Stream::kInstance);
  const auto obj = make_objective({2, 3}, rng);
  const CoordinateRadiusObjective psi(obj);
  EXPECT_THROW(marginal_gain(psi, std::vector<int>{0}, 1), ContractViolation);
}

TEST(MarginalGain, DiminishingReturnsAndMonotone) {
  Rng rng(8, Stream::kInstance);
  for (int k = 0; k < 1000; ++k) {
    const ActionSpace space{2 + static_cast<int>(rng.below(3)), 2 + static_cast<int>(rng.below(3))};
    const auto obj = make_objective(space, rng);
    const CoordinateRadiusObjective psi(obj);
    const auto tr = random_triple(space, rng);
    const double gs = marginal_gain(psi, tr.s, tr.a);
    const double gt = marginal_gain(psi, tr.t, tr.a);
    EXPECT_GE(gs, gt - 1e-9);
    EXPECT_GE(gt, -1e-9);
  }
}

TEST(MarginalGain, BatchedGainsMatchDefinition) {
  Rng rng(9, Stream::kInstance);
  for (int k = 0; k < 100; ++k) {
    const ActionSpace space{3, 4};
    const auto obj = make_objective(space, rng);
    const NodeScoreObjective node(obj);
    const CoordinateRadiusObjective psi(obj);
    const auto tr = random_triple(space, rng);
    const auto gn = node.gains(tr.t);
    const auto gp = psi.gains(tr.t);
    EXPECT_NEAR(gn[tr.a], marginal_gain(node, tr.t, tr.a), 1e-7 * std::max(1.0, std::abs(gn[tr.a])));
    EXPECT_NEAR(gp[tr.a], marginal_gain(psi, tr.t, tr.a), 1e-9);
  }
}

TEST(NodeScoreObjective, CompleteActionEqualsShiftedTreeScore) {
  Rng rng(10, Stream::kInstance);
  const ActionSpace space{3, 3};
  const auto obj = make_objective(space, rng);
  const NodeScoreObjective node(obj);
  JointAction a{0, 0, 0};
  do {
    EXPECT_NEAR(node.value(coordinates(space, a)), obj.shifted_node_score(a), 1e-6);
  } while (next_action(space, a));
}

TEST(Selection, Deterministic) {
  Rng r1(11), r2(11);
  const auto o1 = make_objective({4, 4}, r1);
  const auto o2 = make_objective({4, 4}, r2);
  EXPECT_EQ(greedy_select(NodeScoreObjective(o1)).action, greedy_select(NodeScoreObjective(o2)).action);
  EXPECT_EQ(o1.node_score(JointAction{1, 2, 3, 0}), o1.node_score(JointAction{1, 2, 3, 0}));
}
