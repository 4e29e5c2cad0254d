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

// Joint-action bandit policies: the ellipsoid rule over n-hot features and the
// count-based controls that treat each of the d^n joint actions as its own arm.

#ifndef LINZERO_BANDIT_HPP
#define LINZERO_BANDIT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

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

class BanditPolicy {
 public:
  virtual ~BanditPolicy() = default;
  virtual JointAction choose() = 0;
  virtual void observe(const JointAction& action, double reward) = 0;
  /// Current confidence radius, NaN for policies without one.
  virtual double beta() const { return std::numeric_limits<double>::quiet_NaN(); }
};

struct LinUctOptions {
  double lambda = 1e-4;
  ConvexLoss loss{};
  double delta = 0.01;
  double s_bound = 1.0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// argmax_a <theta, a> + beta_t ||a||_{V^{-1}}, exact when d^n fits the cap and
/// the design keeps a dense inverse, greedy otherwise. Each observation is
/// weighted by f'' at its residual against the current estimate.
class LinUctBandit : public BanditPolicy {
 public:
  LinUctBandit(ActionSpace space, LinUctOptions options)
      : space_(space), options_(options), design_(space, DesignOptions{options.lambda}) {
    options_.loss.check();
    schedule_ = BetaSchedule{options_.delta, options_.s_bound, options_.loss.mu(), options_.lambda, 0.0};
    schedule_.check();
    const std::uint64_t count = space_.joint_count();
    if (design_.dense() && count != 0 && count <= options_.enumeration_cap) {
      JointAction a(std::vector<int>(space_.agents, 0));
      do {
        const auto c = coordinates(space_, a);
        coords_.insert(coords_.end(), c.begin(), c.end());
      } while (next_action(space_, a));
      enumerate_ = true;
    }
  }

  const DesignState& design() const noexcept { return design_; }
  const BetaSchedule& schedule() const noexcept { return schedule_; }
  double beta() const override { return schedule_.value_at(design_.log_det_ratio()); }

  JointAction choose() override {
    const double b = beta();
    if (!enumerate_) return greedy_select(NodeScoreObjective(SelectionObjective::ellipsoid(design_, b))).action;
    const Eigen::VectorXd& theta = design_.theta();
    const Eigen::MatrixXd& vinv = design_.dense_inverse();
    const int n = space_.agents;
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0, off = 0; off < coords_.size(); ++k, off += n) {
      const int* c = coords_.data() + off;
      double lin = 0.0, q = 0.0;
      for (int r = 0; r < n; ++r) {
        lin += theta[c[r]];
        for (int s = 0; s < n; ++s) q += vinv(c[r], c[s]);
      }
      const double score = lin + b * std::sqrt(std::max(q, 0.0));
      if (k == 0 || detail::strictly_better(score, best_score)) {
        best = k;
        best_score = score;
      }
    }
    return decode_rank(space_, best);
  }

  void observe(const JointAction& action, double reward) override {
    const double w = options_.loss.weight(reward - design_.predict(action));
    design_.update(action, reward, w);
    schedule_.logdet_accum = design_.log_det_ratio();
  }

 private:
  ActionSpace space_;
  LinUctOptions options_;
  DesignState design_;
  BetaSchedule schedule_;
  bool enumerate_ = false;
  std::vector<int> coords_;
};

/// Base for policies holding one statistic per joint action.
class JointArmPolicy : public BanditPolicy {
 public:
  JointArmPolicy(ActionSpace space, std::uint64_t cap) : space_(space) {
    const std::uint64_t count = space_.joint_count();
    if (count == 0 || count > cap) throw SizeError("joint arm count exceeds cap " + std::to_string(cap));
    pulls_.assign(count, 0.0);
    sums_.assign(count, 0.0);
  }

  void observe(const JointAction& action, double reward) override {
    const std::uint64_t k = rank(action);
    pulls_[k] += 1.0;
    sums_[k] += reward;
    total_ += 1.0;
  }

 protected:
  std::uint64_t rank(const JointAction& action) const {
    validate(space_, action);
    std::uint64_t k = 0;
    for (int i = 0; i < space_.agents; ++i) k = k * space_.actions_per_agent + action[i];
    return k;
  }

  template <class Score>
  JointAction argmax(Score&& score) const {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pulls_.size(); ++k) {
      const double s = score(k);
      if (k == 0 || s > best_score) {
        best = k;
        best_score = s;
      }
    }
    return decode_rank(space_, best);
  }

  double mean(std::size_t k) const { return pulls_[k] > 0.0 ? sums_[k] / pulls_[k] : 0.0; }

  ActionSpace space_;
  std::vector<double> pulls_;
  std::vector<double> sums_;
  double total_ = 0.0;
};

/// UCB1 over the d^n joint arms; unpulled arms first, in lexicographic order.
class FlatUcbBandit : public JointArmPolicy {
 public:
  FlatUcbBandit(ActionSpace space, std::uint64_t cap = kDefaultEnumerationCap) : JointArmPolicy(space, cap) {}

  JointAction choose() override {
    return argmax([&](std::size_t k) { return flat_ucb_score(mean(k), pulls_[k], total_); });
  }
};

/// pUCT over the d^n joint arms with a uniform prior.
class PuctBandit : public JointArmPolicy {
 public:
  PuctBandit(ActionSpace space, double c1 = 1.25, double c2 = 19652.0, std::uint64_t cap = kDefaultEnumerationCap)
      : JointArmPolicy(space, cap), c1_(c1), c2_(c2) {}

  JointAction choose() override {
    const double c = exploration_coefficient(total_, c1_, c2_);
    const double p = 1.0 / static_cast<double>(pulls_.size());
    return argmax([&](std::size_t k) { return puct_score(mean(k), p, total_, pulls_[k], c); });
  }

 private:
  double c1_;
  double c2_;
};

class RandomBandit : public BanditPolicy {
 public:
  RandomBandit(ActionSpace space, std::uint64_t seed)
      : prior_(PriorModel::uniform(space)), rng_(seed, Stream::kSelector) {}

  JointAction choose() override { return prior_.sample(rng_); }
  void observe(const JointAction&, double) override {}

 private:
  PriorModel prior_;
  Rng rng_;
};

inline std::unique_ptr<BanditPolicy> make_bandit(SelectorKind kind, const ActionSpace& space,
                                                 const LinUctOptions& options, std::uint64_t seed, double c1 = 1.25,
                                                 double c2 = 19652.0) {
  switch (kind) {
    case SelectorKind::kLinUct: return std::make_unique<LinUctBandit>(space, options);
    case SelectorKind::kFlatUcb: return std::make_unique<FlatUcbBandit>(space, options.enumeration_cap);
    case SelectorKind::kPuct: return std::make_unique<PuctBandit>(space, c1, c2, options.enumeration_cap);
    case SelectorKind::kRandom: return std::make_unique<RandomBandit>(space, seed);
  }
  throw ConfigError("unknown selector");
}

}  // namespace linzero

#endif  // LINZERO_BANDIT_HPP
