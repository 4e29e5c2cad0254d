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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "linzero/design_state.hpp"
#include "oracles.hpp"

using namespace linzero;

namespace {

double max_abs_diff(const Eigen::VectorXd& a, const oracle::VecL& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, static_cast<double>(std::abs(a[i] - b[i])));
  return m;
}

}  // namespace

TEST(DesignState, FreshState) {
  const ActionSpace space{3, 4};
  DesignState d(space, {0.5});
  const JointAction a{1, 2, 3};
  d.register_candidate(a);
  EXPECT_TRUE(d.theta().isZero());
  EXPECT_TRUE(d.m_accum().isZero());
  EXPECT_EQ(d.trace(), 12 * 0.5);
  EXPECT_EQ(d.update_count(), 0u);
  EXPECT_TRUE(d.cached(a)->isApprox(encode(space, a) / 0.5));
}

TEST(DesignState, SingleUpdateMatchesExplicitInverse) {
  // n = 2, d = 1: A = (1, 1), lambda = 1, X = 1, w = 1.
  DesignState d({2, 1}, {1.0});
  d.update(JointAction{0, 0}, 1.0, 1.0);
  Eigen::Matrix2d v;
  v << 2, 1, 1, 2;
  const Eigen::Vector2d want = v.inverse() * Eigen::Vector2d(1, 1);
  EXPECT_NEAR(d.theta()[0], want[0], 1e-15);
  EXPECT_NEAR(d.theta()[1], want[1], 1e-15);
}

TEST(DesignState, RejectsBadInputs) {
  DesignState d({2, 2});
  EXPECT_THROW(d.update(JointAction{0, 0}, std::numeric_limits<double>::quiet_NaN(), 1.0), NumericError);
  EXPECT_THROW(d.update(JointAction{0, 0}, std::numeric_limits<double>::infinity(), 1.0), NumericError);
  EXPECT_THROW(d.update(JointAction{0, 0}, 1.0, 0.0), NumericError);
  EXPECT_THROW(d.update(JointAction{0, 2}, 1.0, 1.0), InvalidAction);
  EXPECT_THROW(DesignState({2, 2}, {0.0}), ConfigError);
}

TEST(DesignState, RegistrationRequiredWhenConfigured) {
  DesignOptions opt;
  opt.require_registration = true;
  DesignState d({2, 2}, opt);
  EXPECT_THROW(d.quad_form(JointAction{1, 1}), ContractViolation);
  d.register_candidate(JointAction{1, 1});
  EXPECT_NO_THROW(d.quad_form(JointAction{1, 1}));
}

// Incremental theta, cached V^{-1}a and uncached products against a
// long-double rebuild, in both inverse modes.
class ShermanMorrison : public ::testing::TestWithParam<InverseMode> {};

TEST_P(ShermanMorrison, MatchesDenseOracle) {
  Rng rng(2024, Stream::kInstance);
  for (int trial = 0; trial < 6; ++trial) {
    const ActionSpace space{1 + static_cast<int>(rng.below(5)), 1 + static_cast<int>(rng.below(10))};
    const double lambda = trial % 2 ? 1e-4 : 1.0;
    DesignState d(space, {lambda, GetParam()});
    std::vector<JointAction> cands;
    for (int k = 0; k < 6; ++k) {
      cands.push_back(oracle::random_action(space, rng));
      d.register_candidate(cands.back());
    }
    std::vector<oracle::Obs> obs;
    for (int t = 0; t < 300; ++t) {
      const auto a = oracle::random_action(space, rng);
      const double x = rng.normal(2.0, 3.0);
      const double w = rng.uniform(0.75, 1.0);
      d.update(a, x, w);
      obs.push_back({a, x, w});
    }
    const oracle::DenseRidge ref(space, lambda, obs);
    EXPECT_LT(max_abs_diff(d.theta(), ref.theta()), 1e-8);
    for (const auto& a : cands) EXPECT_LT(max_abs_diff(*d.cached(a), ref.vinv_times(a)), 1e-8);
    const auto fresh = oracle::random_action(space, rng);
    EXPECT_LT(max_abs_diff(d.vinv_times(fresh), ref.vinv_times(fresh)), 1e-8);
    EXPECT_NEAR(d.quad_form(fresh), static_cast<double>(ref.quad(fresh)), 1e-8);
    EXPECT_NEAR(d.log_det_ratio(), static_cast<double>(ref.log_det_ratio(lambda)), 1e-8);
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, ShermanMorrison, ::testing::Values(InverseMode::kDense, InverseMode::kHistory));

TEST(DesignState, HistoryAndDenseAgree) {
  const ActionSpace space{4, 5};
  DesignState dense(space, {1e-4, InverseMode::kDense});
  DesignState hist(space, {1e-4, InverseMode::kHistory});
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto a = oracle::random_action(space, rng);
    const double x = rng.normal();
    dense.update(a, x, 1.0);
    hist.update(a, x, 1.0);
  }
  EXPECT_LT((dense.inverse() - hist.inverse()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((dense.theta() - hist.theta()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DesignState, TraceLawExactForIntegerWeights) {
  const ActionSpace space{3, 5};
  DesignState d(space, {0.25});
  Rng rng(9);
  double wsum = 0.0;
  for (int t = 0; t < 500; ++t) {
    const double w = 1.0 + static_cast<double>(rng.below(3));
    d.update(oracle::random_action(space, rng), rng.normal(), w);
    wsum += w;
    ASSERT_EQ(d.trace(), 15 * 0.25 + 3 * wsum);
  }
}

TEST(DesignState, TraceLawRealWeights) {
  const ActionSpace space{4, 3};
  DesignState d(space);
  Rng rng(10);
  double wsum = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double w = rng.uniform(0.75, 1.0);
    d.update(oracle::random_action(space, rng), rng.normal(), w);
    wsum += w;
  }
  const double want = 12 * 1e-4 + 4 * wsum;
  EXPECT_NEAR(d.trace(), want, 1e-12 * want);
  EXPECT_NEAR(d.trace(), d.gram().trace(), 1e-12 * want);
}

TEST(DesignState, EllipticalPotential) {
  // sum_t min(1, w_t ||A_t||^2_{V_{t-1}^{-1}}) <= 2 ln(det V_T / det V_0) on every trajectory.
  Rng rng(77, Stream::kInstance);
  for (int run = 0; run < 50; ++run) {
    const ActionSpace space{1 + static_cast<int>(rng.below(4)), 2 + static_cast<int>(rng.below(4))};
    DesignState d(space, {run % 2 ? 1e-4 : 1.0});
    double lhs = 0.0;
    for (int t = 0; t < 400; ++t) {
      const auto a = oracle::random_action(space, rng);
      const double w = rng.uniform(0.75, 1.0);
      lhs += std::min(1.0, w * d.quad_form(a));
      d.update(a, rng.normal(), w);
      ASSERT_LE(lhs, 2.0 * d.log_det_ratio() + 1e-9);
    }
  }
}

TEST(DesignState, GramMatchesObservations) {
  const ActionSpace space{2, 3};
  DesignState d(space, {1.0});
  d.update(JointAction{0, 2}, 1.0, 2.0);
  const Eigen::VectorXd a = encode(space, JointAction{0, 2});
  const Eigen::MatrixXd want = Eigen::MatrixXd::Identity(6, 6) + 2.0 * a * a.transpose();
  EXPECT_TRUE(d.gram().isApprox(want));
  EXPECT_TRUE((d.inverse() * d.gram()).isApprox(Eigen::MatrixXd::Identity(6, 6), 1e-12));
}
