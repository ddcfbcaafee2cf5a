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

#include <cmath>
#include <limits>
#include <random>

#include "markov_ipp/bounds.hpp"
#include "oracle.hpp"

namespace markov_ipp {
namespace {

// Reference values below were evaluated with 40-digit arithmetic offline.

TEST(BoundParams, TemperatureConstants) {
  const BoundParams p = bound_params({40.45, 16.00, 0.1542, 0.0036}, {5.0, 5.0});
  EXPECT_NEAR(p.rho, 1.0233463035019455, 1e-15);
  EXPECT_NEAR(p.noise_to_signal, 0.0233463, 1e-7);
  EXPECT_NEAR(p.ell1_norm, 8.09, 1e-12);
  EXPECT_NEAR(p.ell2_norm, 3.2, 1e-12);
  EXPECT_NEAR(p.xi, std::exp(-1.0 / (2.0 * 8.09 * 8.09)), 1e-15);
}

TEST(BoundParams, PlanktonNoiseToSignal) {
  const BoundParams p = bound_params({27.53, 134.64, 2.152, 0.041}, {1.0, 1.0});
  EXPECT_NEAR(p.noise_to_signal, 0.0190520, 1e-7);
}

TEST(BoundParams, UnitNormalizedLengthScale) {
  const BoundParams p = bound_params({5.0, 5.0, 1.0, 0.0}, {5.0, 5.0});
  EXPECT_NEAR(p.xi, 0.60653065971263342, 1e-15);
  EXPECT_DOUBLE_EQ(p.rho, 1.0);
  EXPECT_TRUE(is_isotropic(p));
  EXPECT_FALSE(is_isotropic(bound_params({5.0, 6.0, 1.0, 0.0}, {5.0, 5.0})));
}

TEST(Delta, ReferenceValues) {
  EXPECT_NEAR(delta(1, BoundParams::from_xi_rho(0.5, 2.0)), 0.01204877578953025103, 1e-15);
  EXPECT_NEAR(delta(2, BoundParams::from_xi_rho(0.1, 2.0)), 2.791814400904010688e-5, 1e-18);
  const double expect[] = {0.0, 0.001248863567289370533, 0.003038382882240562271,
                           0.005816663248033540127, 0.01071611331175357387};
  const BoundParams p = BoundParams::from_xi_rho(0.3, 2.0);
  for (int i = 0; i <= 4; ++i) EXPECT_NEAR(delta(i, p), expect[i], 1e-15) << i;
}

TEST(Delta, ZeroAtStageZeroAndWithoutCorrelation) {
  EXPECT_EQ(delta(0, BoundParams::from_xi_rho(0.9, 1.0)), 0.0);
  EXPECT_EQ(delta(3, BoundParams::from_xi_rho(0.0, 1.2)), 0.0);
}

TEST(Delta, NondecreasingInStage) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double rho = 1.0 + 2.0 * u(rng);
    const int t = 1 + static_cast<int>(u(rng) * 12);
    const double xi = u(rng) * std::min(1.0, rho / t);
    const BoundParams p = BoundParams::from_xi_rho(xi, rho);
    for (int i = 1; i <= t; ++i) EXPECT_LE(delta(i - 1, p), delta(i, p));
  }
}

TEST(Delta, VacuousWhenLogArgumentLeavesDomain) {
  // xi close to rho / i keeps the denominator positive but drives q past 1.
  const BoundParams p = BoundParams::from_xi_rho(0.999, 1.0);
  EXPECT_TRUE(std::isinf(delta(1, p)));
}

TEST(Delta, ConditionViolated) {
  const BoundParams p = BoundParams::from_xi_rho(0.6, 1.0);
  EXPECT_NO_THROW(delta(1, p));
  try {
    delta(2, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConditionViolated);
  }
  EXPECT_THROW(delta(-1, p), Error);
}

TEST(DeltaK, ReferenceValues) {
  const BoundParams p = BoundParams::from_xi_rho(0.1, 2.0);
  EXPECT_NEAR(delta_k(2, 2, p), 0.0001275591557313533836, 1e-18);
  // With one robot the multi-robot form is slightly looser than delta.
  EXPECT_NEAR(delta_k(2, 1, p), 2.805914869279268802e-5, 1e-18);
  EXPECT_GE(delta_k(2, 1, p), delta(2, p));
}

TEST(DeltaK, Errors) {
  BoundParams aniso = BoundParams::from_xi_rho(0.1, 2.0);
  aniso.ell2_norm = aniso.ell1_norm * 2.0;
  try {
    delta_k(1, 2, aniso);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAnisotropyViolated);
  }
  // xi must stay below rho / (4k) even at i = 0.
  try {
    delta_k(0, 2, BoundParams::from_xi_rho(0.3, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConditionViolated);
  }
  EXPECT_EQ(delta_k(0, 2, BoundParams::from_xi_rho(0.1, 1.0)), 0.0);
}

TEST(DeltaK, NondecreasingInStage) {
  const BoundParams p = BoundParams::from_xi_rho(0.05, 1.1);
  for (int i = 1; i <= 5; ++i) EXPECT_LE(delta_k(i - 1, 2, p), delta_k(i, 2, p));
}

TEST(Epsilon, TailSumsAndLooseForm) {
  const BoundParams p = BoundParams::from_xi_rho(0.3, 2.0);
  const EpsilonBound e0 = epsilon(0, 4, p);
  EXPECT_NEAR(e0.sum, 0.02082002300931704680, 1e-15);
  EXPECT_NEAR(e0.loose, 5 * 0.01071611331175357387, 1e-15);
  EXPECT_NEAR(epsilon(4, 4, p).sum, delta(4, p), 0.0);
  EXPECT_THROW(epsilon(5, 4, p), Error);
}

TEST(Epsilon, SumNeverExceedsLooseForm) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double rho = 1.0 + u(rng);
    const int t = 1 + static_cast<int>(u(rng) * 10);
    const BoundParams p = BoundParams::from_xi_rho(u(rng) * std::min(1.0, rho / t), rho);
    for (int i = 0; i <= t; ++i) {
      const EpsilonBound e = epsilon(i, t, p);
      EXPECT_LE(e.sum, e.loose);
      if (i > 0) {
        EXPECT_LE(e.sum, epsilon(i - 1, t, p).sum);
      }
    }
  }
}

TEST(VarianceReductionBound, ReferenceValue) {
  // sigma_s^2 xi^4 / (rho/i - xi) with xi = 0.5, rho = 2, sigma_s^2 = 1.
  EXPECT_NEAR(variance_reduction_bound(1, BoundParams::from_xi_rho(0.5, 2.0)),
              0.041666666666666667, 1e-16);
  EXPECT_NEAR(variance_reduction_bound(2, BoundParams::from_xi_rho(0.5, 2.0)), 0.125, 1e-16);
  EXPECT_EQ(variance_reduction_bound(0, BoundParams::from_xi_rho(0.5, 2.0)), 0.0);
}

TEST(SingleRobotSandwich, MonteCarlo) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int r = 1 + static_cast<int>(u(rng) * 4);
    const int i = 1 + static_cast<int>(u(rng) * 4);
    const Hyperparams h{0.3 + 2.0 * u(rng), 0.3 + 2.0 * u(rng), 0.5 + u(rng),
                        0.01 + 0.5 * u(rng)};
    TransectGrid g;
    g.n_rows = r;
    g.n_cols = i + 2;
    const BoundParams p = bound_params(h, g.widths());
    if (!(p.xi < p.rho / i)) continue;
    std::uniform_int_distribution<int> row(0, r - 1);
    LocationList past;
    for (int c = 0; c < i; ++c) past.push_back({c, row(rng)});
    const LocationList cur{{i, row(rng)}}, next{{i + 1, row(rng)}};
    LocationList all = past;
    all.push_back(cur[0]);
    const double reduction =
        posterior_cov(next, cur, h, g.widths())(0, 0) -
        posterior_cov(next, all, h, g.widths())(0, 0);
    EXPECT_GE(reduction, -1e-9);
    EXPECT_LE(reduction, variance_reduction_bound(i, p) + 1e-9);
    const double mi = cond_mutual_info(next, past, cur, h, g.widths());
    EXPECT_GE(mi, -1e-9);
    EXPECT_LE(mi, delta(i, p) + 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(CovarianceCondition, TrivialCases) {
  TransectGrid g;
  g.n_rows = 3;
  g.n_cols = 4;
  const Hyperparams h{1.0, 1.0, 1.0, 0.1};
  // A one-column history has nothing further to condition on.
  EXPECT_FALSE(
      covariance_condition_violation({1, 0}, {1, 2}, {RobotConfig({1})}, g, h).has_value());
  // u == v reduces to variance, which only shrinks with more conditioning.
  for (int m = 0; m < 3; ++m) {
    const std::vector<RobotConfig> hist{RobotConfig({m}), RobotConfig({(m + 1) % 3}),
                                        RobotConfig({2})};
    EXPECT_FALSE(covariance_condition_violation({3, 1}, {3, 1}, hist, g, h).has_value());
  }
  const CovarianceConditionReport rep = check_covariance_condition(g, h, 50, 1, 1);
  EXPECT_EQ(rep.tuples, 50u);
  EXPECT_THROW(check_covariance_condition(g, h, 0, 1, 1), Error);
}

TEST(CovarianceCondition, Deterministic) {
  TransectGrid g;
  g.n_rows = 4;
  g.n_cols = 5;
  const Hyperparams h{1.0, 1.0, 1.0, 0.05};
  const CovarianceConditionReport a = check_covariance_condition(g, h, 100, 77, 2);
  const CovarianceConditionReport b = check_covariance_condition(g, h, 100, 77, 2);
  EXPECT_EQ(a.passed, b.passed);
  EXPECT_EQ(a.counterexamples.size(), b.counterexamples.size());
}

TEST(BoundReport, FlagsUnmetCondition) {
  const BoundReport r = bound_report(BoundParams::from_xi_rho(0.6, 1.0), 3, 1);
  EXPECT_FALSE(r.condition_met);
  EXPECT_NE(r.condition_note.find("unmet"), std::string::npos);
  ASSERT_EQ(r.delta.size(), 4u);
  EXPECT_FALSE(std::isnan(r.delta[1]));
  EXPECT_TRUE(std::isnan(r.delta[2]));
  EXPECT_TRUE(std::isnan(r.epsilon[0]));
}

TEST(BoundReport, AnisotropicMultiRobot) {
  BoundParams p = BoundParams::from_xi_rho(0.01, 1.0);
  p.ell2_norm = 3.0 * p.ell1_norm;
  const BoundReport r = bound_report(p, 2, 2);
  EXPECT_FALSE(r.isotropic);
  EXPECT_FALSE(r.condition_met);
  EXPECT_NE(r.condition_note.find("l1'"), std::string::npos);
}

TEST(VerifyTheorems, LargeNoiseMakesBoundsTight) {
  // A large noise floor pushes rho up; the bound shrinks toward zero and the
  // Markov and exact values coincide.
  TransectGrid g;
  g.n_rows = 3;
  g.n_cols = 5;
  const Hyperparams h{1.0, 1.0, 1.0, 1e6};
  const BoundReport r = verify_theorems(g, h, 1);
  ASSERT_TRUE(r.verified);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.epsilon.front(), 1e-12);
  for (const auto& c : r.checks) EXPECT_NEAR(c.markov_value, c.exact_value, 1e-9);
}

TEST(VerifyTheorems, RandomSmallInstances) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int verified = 0;
  for (int trial = 0; trial < 40; ++trial) {
    TransectGrid g;
    g.n_rows = 2 + static_cast<int>(u(rng) * 3);
    g.n_cols = 3 + static_cast<int>(u(rng) * 3);
    const Hyperparams h{0.3 + 1.5 * u(rng), 0.3 + 2.0 * u(rng), 1.0, 0.02 + u(rng)};
    const BoundReport r = verify_theorems(g, h, 1);
    if (!r.verified) continue;
    ++verified;
    EXPECT_EQ(r.violations, 0u);
    EXPECT_EQ(r.checks.size(), static_cast<std::size_t>(g.n_rows));
  }
  EXPECT_GT(verified, 10);
}

TEST(VerifyTheorems, BoundTightensWithWiderColumns) {
  // Spreading columns apart lowers xi and with it every delta.
  const Hyperparams h{5.0, 5.0, 1.0, 0.1};
  double previous = std::numeric_limits<double>::infinity();
  for (double w1 : {8.0, 10.0, 14.0, 20.0}) {
    const BoundParams p = bound_params(h, {w1, 1.0});
    ASSERT_TRUE(single_robot_condition(p, 2));
    const double e = epsilon(0, 2, p).sum;
    EXPECT_LT(e, previous);
    previous = e;
  }
}

TEST(VerifyTheorems, RefusesOversizedInstance) {
  TransectGrid g;
  g.n_rows = 6;
  g.n_cols = 12;
  try {
    verify_theorems(g, {0.5, 0.5, 1.0, 0.5}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}

}  // namespace
}  // namespace markov_ipp
