// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "markov_ipp/planners.hpp"
#include "oracle.hpp"

namespace markov_ipp {
namespace {

using Seq = std::vector<RobotConfig>;

TransectGrid make_grid(int r, int c, double w1 = 1.0, double w2 = 1.0) {
  TransectGrid g;
  g.n_rows = r;
  g.n_cols = c;
  g.omega1 = w1;
  g.omega2 = w2;
  return g;
}

// Visits every continuation of `prefix` to the last column.
void for_each_sequence(const TransectGrid& g, int k, Seq& prefix,
                       const std::function<void(const Seq&)>& visit) {
  if (static_cast<int>(prefix.size()) == g.n_cols) {
    visit(prefix);
    return;
  }
  for (const auto& a : enumerate_configs(g.n_rows, k)) {
    prefix.push_back(a);
    for_each_sequence(g, k, prefix, visit);
    prefix.pop_back();
  }
}

double markov_objective(const Seq& s, const TransectGrid& g, const Hyperparams& h) {
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    v += oracle::cond_entropy(oracle::column(s[i + 1], static_cast<int>(i + 1)),
                              oracle::column(s[i], static_cast<int>(i)), h, g.widths());
  }
  return v;
}

double full_objective(const Seq& s, const TransectGrid& g, const Hyperparams& h) {
  std::vector<Location> all, start = oracle::column(s[0], 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = oracle::column(s[i], static_cast<int>(i));
    all.insert(all.end(), c.begin(), c.end());
  }
  const auto w = g.widths();
  return oracle::entropy(oracle::gram(all, all, h, w)) -
         oracle::entropy(oracle::gram(start, start, h, w));
}

double brute_force(const TransectGrid& g, const Hyperparams& h, const RobotConfig& x0,
                   bool markov) {
  double best = -std::numeric_limits<double>::infinity();
  Seq prefix{x0};
  for_each_sequence(g, x0.robots(), prefix, [&](const Seq& s) {
    best = std::max(best, markov ? markov_objective(s, g, h) : full_objective(s, g, h));
  });
  return best;
}

TEST(MarkovPlanner, MatchesBruteForceOnSmallInstances) {
  std::mt19937_64 rng(101);
  for (int r = 1; r <= 3; ++r) {
    for (int k = 1; k <= std::min(2, r); ++k) {
      for (int c = 3; c <= 4; ++c) {
        for (int draw = 0; draw < 3; ++draw) {
          const Hyperparams h = oracle::random_hyper(rng);
          const auto g = make_grid(r, c);
          const MarkovPolicy p = plan_markov(g, h, k);
          for (const auto& x0 : enumerate_configs(r, k)) {
            EXPECT_NEAR(p.value(0, x0), brute_force(g, h, x0, true), 1e-9)
                << "r=" << r << " k=" << k << " C=" << c;
          }
        }
      }
    }
  }
}

TEST(MarkovPlanner, TableShape) {
  const auto g = make_grid(5, 7);
  const MarkovPolicy p = plan_markov(g, {2, 1, 1, 0.1}, 2);
  EXPECT_EQ(p.configs().size(), 10u);
  ASSERT_EQ(p.value_table.size(), 6u);
  for (const auto& stage : p.value_table) EXPECT_EQ(stage.size(), 10u);
  EXPECT_EQ(p.value(6, RobotConfig({0, 1})), 0.0);
}

TEST(MarkovPlanner, BellmanConsistency) {
  std::mt19937_64 rng(7);
  for (int r = 2; r <= 5; ++r) {
    const Hyperparams h = oracle::random_hyper(rng);
    const auto g = make_grid(r, 6);
    const MarkovPolicy p = plan_markov(g, h, 1);
    for (int s = 0; s <= p.horizon; ++s) {
      for (const auto& x : p.configs()) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& a : p.configs()) {
          const double q = oracle::cond_entropy(oracle::column(a, s + 1), oracle::column(x, s),
                                                h, g.widths()) + p.value(s + 1, a);
          best = std::max(best, q);
        }
        EXPECT_NEAR(p.value(s, x), best, 1e-9);
        const auto& a = p.action(s, x);
        const double chosen = oracle::cond_entropy(oracle::column(a, s + 1),
                                                   oracle::column(x, s), h, g.widths()) +
                              p.value(s + 1, a);
        EXPECT_NEAR(chosen, best, 1e-9);
      }
    }
  }
}

TEST(MarkovPlanner, RolloutFollowsActionTable) {
  const auto g = make_grid(4, 6);
  const MarkovPolicy p = plan_markov(g, {1.5, 1.0, 1.0, 0.05}, 2);
  const auto x0 = RobotConfig({1, 3});
  const ObservationPath path = rollout(p, x0);
  ASSERT_EQ(path.configs.size(), 6u);
  EXPECT_EQ(path.configs[0], x0);
  for (int s = 0; s <= p.horizon; ++s) {
    EXPECT_EQ(path.configs[static_cast<std::size_t>(s + 1)],
              p.action(s, path.configs[static_cast<std::size_t>(s)]));
  }
  EXPECT_NO_THROW(path.validate(g));
}

TEST(MarkovPlanner, RejectsConfigOutsideDomain) {
  const MarkovPolicy p = plan_markov(make_grid(3, 4), {1, 1, 1, 0.1}, 1);
  EXPECT_THROW(p.value(0, RobotConfig({3})), Error);
  EXPECT_THROW(p.value(0, RobotConfig({0, 1})), Error);
}

TEST(MarkovPlanner, CachedTableMatchesUncachedEvaluation) {
  const Hyperparams h{1.7, 1.1, 1.2, 0.15};
  const auto g = make_grid(4, 9, 1.3, 0.8);
  const auto t = StagewiseEntropyTable::build(g, h, 2);
  for (int col : {0, 3, 7}) {
    for (std::size_t x = 0; x < t.configs.size(); ++x) {
      for (std::size_t a = 0; a < t.configs.size(); ++a) {
        const double direct = conditional_entropy(config_locations(t.configs[a], col + 1),
                                                  config_locations(t.configs[x], col), h,
                                                  g.widths());
        EXPECT_NEAR(t.entropy(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(a)),
                    direct, 1e-9);
      }
    }
  }
}

TEST(MarkovPlanner, SingleRowAndFullSweepHaveForcedPaths) {
  const Hyperparams h{1.5, 1.0, 1.0, 0.1};
  for (const auto& [r, k] : {std::pair{1, 1}, std::pair{3, 3}}) {
    const auto g = make_grid(r, 5);
    const MarkovPolicy p = plan_markov(g, h, k);
    ASSERT_EQ(p.configs().size(), 1u);
    const RobotConfig x = p.configs().front();
    const double stage = conditional_entropy(config_locations(x, 1), config_locations(x, 0), h,
                                             g.widths());
    EXPECT_NEAR(p.value(0, x), 4.0 * stage, 1e-9);
    EXPECT_EQ(rollout(p, x).configs, std::vector<RobotConfig>(5, x));
  }
}

TEST(Ties, SymmetricTwoRowSingleStepPicksRowZero) {
  // No correlation between distinct cells: both successors score the same.
  const Hyperparams h{1e-3, 1e-3, 1.0, 0.1};
  const auto g = make_grid(2, 2);
  for (int start = 0; start < 2; ++start) {
    const auto scores = greedy_mi_scores(g, h, {{0, start}}, enumerate_configs(2, 1), 1);
    EXPECT_NEAR(scores[0], scores[1], 1e-12);
    EXPECT_EQ(plan_greedy_mi(g, h, RobotConfig({start})).path.configs[1], RobotConfig({0}));
  }
}

TEST(Ties, OverwhelmingNoiseGivesLexicographicPath) {
  const Hyperparams h{2.0, 2.0, 1.0, 1e12};
  const auto g = make_grid(3, 4);
  const PlanResult res = plan_greedy_entropy(g, h, RobotConfig({2}));
  for (std::size_t c = 1; c < res.path.configs.size(); ++c) {
    EXPECT_EQ(res.path.configs[c], RobotConfig({0}));
  }
}

TEST(ExactPlanner, MatchesBruteForce) {
  std::mt19937_64 rng(202);
  for (int r = 2; r <= 3; ++r) {
    for (int k = 1; k <= 2; ++k) {
      const Hyperparams h = oracle::random_hyper(rng);
      const auto g = make_grid(r, 4);
      for (const auto& x0 : enumerate_configs(r, k)) {
        const PlanResult res = plan_exact(g, h, x0);
        const double ref = brute_force(g, h, x0, false);
        EXPECT_NEAR(res.value, ref, 1e-9);
        EXPECT_NEAR(path_entropy(res.path, g, h), ref, 1e-9);
      }
    }
  }
}

TEST(ExactPlanner, DominatesEveryOtherPolicy) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 10; ++trial) {
    const Hyperparams h = oracle::random_hyper(rng);
    const auto g = make_grid(3, 5);
    const MarkovPolicy mp = plan_markov(g, h, 1);
    for (const auto& x0 : enumerate_configs(3, 1)) {
      const double best = plan_exact(g, h, x0).value;
      EXPECT_GE(best + 1e-9, path_entropy(rollout(mp, x0), g, h));
      EXPECT_GE(best + 1e-9, plan_greedy_entropy(g, h, x0).value);
      EXPECT_GE(best + 1e-9, plan_greedy_mi(g, h, x0).value);
      EXPECT_LE(best, mp.value(0, x0) + 1e-9);  // less conditioning, more entropy
    }
  }
}

TEST(ExactPlanner, BudgetIsEnforced) {
  const auto g = make_grid(5, 12);
  try {
    plan_exact(g, {1, 1, 1, 0.1}, RobotConfig({0}), 1e6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
  EXPECT_EQ(exact_search_size(make_grid(3, 4), 1, 1), 27.0);
  EXPECT_NO_THROW(plan_exact(make_grid(3, 4), {1, 1, 1, 0.1}, RobotConfig({0}), 27));
}

TEST(SingleStage, AllPlannersAgreeWhenOnlyOneStepRemains) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const Hyperparams h = oracle::random_hyper(rng);
    const auto g = make_grid(4, 2);
    const MarkovPolicy mp = plan_markov(g, h, 2);
    for (const auto& x0 : enumerate_configs(4, 2)) {
      const PlanResult ex = plan_exact(g, h, x0);
      const PlanResult ge = plan_greedy_entropy(g, h, x0);
      EXPECT_EQ(ge.path.configs, ex.path.configs);
      EXPECT_EQ(rollout(mp, x0).configs, ex.path.configs);
      EXPECT_NEAR(mp.value(0, x0), ex.value, 1e-9);
    }
  }
}

TEST(Ties, IndependentLocationsPickLexicographicallySmallest) {
  // Length-scales far below the cell width make every location independent,
  // so all actions score the same.
  const Hyperparams h{1e-3, 1e-3, 1.0, 0.1};
  for (int k = 1; k <= 2; ++k) {
    const auto g = make_grid(4, 5);
    const auto x0 = enumerate_configs(4, k).back();
    for (PolicyKind kind : {PolicyKind::kMarkov, PolicyKind::kExact,
                            PolicyKind::kGreedyEntropy, PolicyKind::kGreedyMi}) {
      const PlanResult res = plan(kind, g, h, x0);
      for (std::size_t c = 1; c < res.path.configs.size(); ++c) {
        EXPECT_EQ(res.path.configs[c], enumerate_configs(4, k).front()) << to_string(kind);
      }
    }
  }
}

TEST(GreedyEntropy, EachStepIsTheOracleArgmax) {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 10; ++trial) {
    const Hyperparams h = oracle::random_hyper(rng);
    const auto g = make_grid(4, 5);
    const PlanResult res = plan_greedy_entropy(g, h, RobotConfig({2}));
    std::vector<Location> hist = oracle::column(res.path.configs[0], 0);
    for (int c = 1; c < g.n_cols; ++c) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& a : enumerate_configs(4, 1)) {
        best = std::max(best, oracle::cond_entropy(oracle::column(a, c), hist, h, g.widths()));
      }
      const auto chosen = oracle::column(res.path.configs[static_cast<std::size_t>(c)], c);
      EXPECT_NEAR(oracle::cond_entropy(chosen, hist, h, g.widths()), best, 1e-9);
      hist.insert(hist.end(), chosen.begin(), chosen.end());
    }
  }
}

TEST(GreedyMi, ScoresMatchOracleOnFiveByEight) {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 5; ++trial) {
    const Hyperparams h = oracle::random_hyper(rng);
    const auto g = make_grid(5, 8);
    const auto actions = enumerate_configs(5, 1);
    std::uniform_int_distribution<int> row(0, 4);
    std::vector<Location> visited;
    for (int c = 0; c < 3; ++c) visited.push_back({c, row(rng)});
    const auto scores = greedy_mi_scores(g, h, visited, actions, 3);
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const auto a = oracle::column(actions[i], 3);
      std::vector<Location> rest;
      for (const auto& l : g.all_locations()) {
        if (std::find(visited.begin(), visited.end(), l) == visited.end() && !(l == a[0])) {
          rest.push_back(l);
        }
      }
      const double ref = oracle::cond_entropy(a, visited, h, g.widths()) -
                         oracle::cond_entropy(a, rest, h, g.widths());
      EXPECT_NEAR(scores[i], ref, 1e-7) << "row " << i;
    }
  }
}

TEST(GreedyMi, SingleRowSingleStepDegeneratesToPriorComplement) {
  // With one row and two columns the complement of {x0, a} is empty, so the
  // score is H[a | x0] - H[a].
  const Hyperparams h{2.0, 1.0, 1.3, 0.2};
  const auto g = make_grid(1, 2);
  const auto scores = greedy_mi_scores(g, h, {{0, 0}}, enumerate_configs(1, 1), 1);
  ASSERT_EQ(scores.size(), 1u);
  const std::vector<Location> a{{1, 0}}, x{{0, 0}};
  const double ref = oracle::cond_entropy(a, x, h, g.widths()) -
                     oracle::cond_entropy(a, {}, h, g.widths());
  EXPECT_NEAR(scores[0], ref, 1e-12);
  EXPECT_LT(scores[0], 0.0);
  EXPECT_EQ(plan_greedy_mi(g, h, RobotConfig({0})).path.configs[1], RobotConfig({0}));
}

TEST(PathEntropy, EqualsSumOfFullHistoryStages) {
  std::mt19937_64 rng(707);
  const Hyperparams h = oracle::random_hyper(rng);
  const auto g = make_grid(4, 5);
  ObservationPath p;
  p.configs = {RobotConfig({0, 3}), RobotConfig({1, 2}), RobotConfig({0, 1}),
               RobotConfig({2, 3}), RobotConfig({1, 3})};
  double sum = 0.0;
  std::vector<Location> hist = oracle::column(p.configs[0], 0);
  for (int c = 1; c < 5; ++c) {
    const auto blk = oracle::column(p.configs[static_cast<std::size_t>(c)], c);
    sum += oracle::cond_entropy(blk, hist, h, g.widths());
    hist.insert(hist.end(), blk.begin(), blk.end());
  }
  EXPECT_NEAR(path_entropy(p, g, h), sum, 1e-9);
  EXPECT_NEAR(path_entropy(p, g, h), full_objective(p.configs, g, h), 1e-9);
}

TEST(Planners, DeterministicAcrossCalls) {
  const Hyperparams h{40.45, 16.0, 0.1542, 0.0036};
  const auto g = make_grid(5, 30, 5.0, 5.0);
  for (PolicyKind kind : {PolicyKind::kMarkov, PolicyKind::kGreedyEntropy,
                          PolicyKind::kGreedyMi}) {
    const auto a = plan(kind, g, h, RobotConfig({2}));
    const auto b = plan(kind, g, h, RobotConfig({2}));
    EXPECT_EQ(a.path.configs, b.path.configs);
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(Planners, PolicyNames) {
  for (PolicyKind kind : {PolicyKind::kMarkov, PolicyKind::kExact,
                          PolicyKind::kGreedyEntropy, PolicyKind::kGreedyMi}) {
    EXPECT_EQ(parse_policy(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_policy("random"), Error);
}

TEST(Planners, StartValidation) {
  const auto g = make_grid(3, 4);
  const Hyperparams h{1, 1, 1, 0.1};
  EXPECT_THROW(plan_greedy_entropy(g, h, RobotConfig({3})), Error);
  try {
    plan_greedy_entropy(g, h, RobotConfig({0, 1, 2, 3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArity);
  }
}

}  // namespace
}  // namespace markov_ipp
