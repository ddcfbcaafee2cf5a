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


// Closed-form bounds on the information lost by conditioning each stage only
// on the previous column, plus numerical checkers that compare the Markov and
// exact planners against those bounds.
//
// Notation used in identifiers:
//   xi   = exp(-1 / (2 l1'^2)) with l1' = ell1 / omega1 (horizontal correlation
//          between adjacent columns),
//   rho  = 1 + noise_var / signal_var.
// delta(i) bounds I[Z_{x_{i+1}} ; Z_{x_{0:i-1}} | Z_{x_i}] for one robot and
// delta_k(i, k) for k robots; epsilon(i) sums them over the remaining stages.

#pragma once

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "markov_ipp/errors.hpp"
#include "markov_ipp/gp.hpp"
#include "markov_ipp/planners.hpp"
#include "markov_ipp/transect.hpp"

namespace markov_ipp {

struct BoundParams {
  double xi = 0.0;
  double rho = 1.0;
  double ell1_norm = 0.0;  // ell1 / omega1
  double ell2_norm = 0.0;  // ell2 / omega2
  double signal_var = 1.0;
  double noise_to_signal = 0.0;

  /// Builds parameters directly from (xi, rho), mostly for analysis and tests.
  static BoundParams from_xi_rho(double xi, double rho, double signal_var = 1.0) {
    BoundParams p;
    p.xi = xi;
    p.rho = rho;
    p.ell1_norm = xi > 0.0 ? std::sqrt(-1.0 / (2.0 * std::log(xi))) : 0.0;
    p.ell2_norm = p.ell1_norm;
    p.signal_var = signal_var;
    p.noise_to_signal = rho - 1.0;
    return p;
  }
};

inline BoundParams bound_params(const Hyperparams& h, const Widths& w) {
  h.validate();
  BoundParams p;
  p.ell1_norm = h.ell1 / w.omega1;
  p.ell2_norm = h.ell2 / w.omega2;
  p.xi = std::exp(-1.0 / (2.0 * p.ell1_norm * p.ell1_norm));
  p.noise_to_signal = h.noise_var / h.signal_var;
  p.rho = 1.0 + p.noise_to_signal;
  p.signal_var = h.signal_var;
  return p;
}

/// xi < rho / t; always true for t = 0.
inline bool single_robot_condition(const BoundParams& p, int t) {
  return t <= 0 || p.xi < p.rho / t;
}

/// xi < min(rho / (i k), rho / (4 k)).
inline bool multi_robot_condition(const BoundParams& p, int i, int k) {
  const double limit = p.rho / (4.0 * k);
  return p.xi < (i > 0 ? std::min(p.rho / (static_cast<double>(i) * k), limit) : limit);
}

inline bool is_isotropic(const BoundParams& p) {
  return std::abs(p.ell1_norm - p.ell2_norm) <= 1e-9 * std::max(1.0, std::abs(p.ell1_norm));
}

namespace detail {

/// 0.5 * log(1 / (1 - q)) for q in [0, 1); +inf once q reaches 1, where the
/// bound carries no information.
inline double half_log_inverse_complement(long double q) {
  if (q <= 0.0L) return 0.0;
  if (q >= 1.0L) return std::numeric_limits<double>::infinity();
  return static_cast<double>(-0.5L * std::log1p(-q));
}

}  // namespace detail

inline double delta(int i, const BoundParams& p) {
  if (i < 0) throw Error(ErrorCode::kInvalidArgument, "stage index must be >= 0");
  if (i == 0) return 0.0;
  if (!(p.xi < p.rho / i)) {
    throw Error(ErrorCode::kConditionViolated,
                "xi >= rho / i at i=" + std::to_string(i));
  }
  const long double xi = p.xi, rho = p.rho;
  const long double q = (xi * xi * xi * xi) / ((rho / i - xi) * (rho - xi * xi));
  return detail::half_log_inverse_complement(q);
}

inline double delta_k(int i, int k, const BoundParams& p) {
  if (i < 0 || k < 1) throw Error(ErrorCode::kInvalidArgument, "need i >= 0 and k >= 1");
  if (!is_isotropic(p)) {
    throw Error(ErrorCode::kAnisotropyViolated, "multi-robot bound needs l1' == l2'");
  }
  if (!multi_robot_condition(p, i, k)) {
    throw Error(ErrorCode::kConditionViolated,
                "xi >= min(rho/(ik), rho/(4k)) at i=" + std::to_string(i));
  }
  if (i == 0) return 0.0;
  const long double xi = p.xi, rho = p.rho, kk = k;
  const long double q = (xi * xi * xi * xi) /
                        ((rho / (i * kk) - xi) * (rho - (4.0L * kk / rho) * xi * xi));
  return static_cast<double>(kk) * detail::half_log_inverse_complement(q);
}

/// Per-stage bound for k robots: delta for k = 1, delta_k otherwise.
inline double stage_bound(int s, int k, const BoundParams& p) {
  return k == 1 ? delta(s, p) : delta_k(s, k, p);
}

struct EpsilonBound {
  double sum = 0.0;    // sum_{s=i}^{t} stage_bound(s)
  double loose = 0.0;  // (t - i + 1) * stage_bound(t)
};

inline EpsilonBound epsilon(int i, int t, const BoundParams& p, int k = 1) {
  if (i < 0 || i > t) throw Error(ErrorCode::kInvalidArgument, "need 0 <= i <= t");
  EpsilonBound e;
  for (int s = i; s <= t; ++s) e.sum += stage_bound(s, k, p);
  e.loose = static_cast<double>(t - i + 1) * stage_bound(t, k, p);
  return e;
}

/// Upper bound on sigma^2_{x_{i+1}|x_i} - sigma^2_{x_{i+1}|x_{0:i}} (one robot).
inline double variance_reduction_bound(int i, const BoundParams& p) {
  if (i < 0) throw Error(ErrorCode::kInvalidArgument, "stage index must be >= 0");
  if (i == 0) return 0.0;
  if (!(p.xi < p.rho / i)) {
    throw Error(ErrorCode::kConditionViolated, "xi >= rho / i at i=" + std::to_string(i));
  }
  const double xi2 = p.xi * p.xi;
  return p.signal_var * xi2 * xi2 / (p.rho / i - p.xi);
}

// ---------------------------------------------------------------------------
// Covariance condition |sigma_{uv|x_{0:i}}| <= |sigma_{uv|x_m}| for all m.

struct CovarianceCounterexample {
  Location u;
  Location v;
  std::vector<RobotConfig> history;  // columns 0..i
  int m = 0;
  double full_history_cov = 0.0;
  double single_stage_cov = 0.0;
};

struct CovarianceConditionReport {
  bool passed = true;
  std::size_t tuples = 0;
  std::vector<CovarianceCounterexample> counterexamples;
};

/// Tests the condition for one tuple; returns the first violating m, if any.
inline std::optional<CovarianceCounterexample> covariance_condition_violation(
    const Location& u, const Location& v, const std::vector<RobotConfig>& history,
    const TransectGrid& grid, const Hyperparams& h) {
  if (history.empty()) return std::nullopt;
  const Widths w = grid.widths();
  const Location pair[] = {u, v};
  auto uv_cov = [&](std::span<const Location> given) {
    const CovMatrix c = posterior_cov(pair, given, h, w);
    return c(0, 1);
  };
  LocationList all;
  for (std::size_t c = 0; c < history.size(); ++c) {
    const auto block = config_locations(history[c], static_cast<int>(c));
    all.insert(all.end(), block.begin(), block.end());
  }
  const double full = std::abs(uv_cov(all));
  for (std::size_t m = 0; m < history.size(); ++m) {
    const double single = std::abs(uv_cov(config_locations(history[m], static_cast<int>(m))));
    if (full > single + 1e-9) {
      return CovarianceCounterexample{u, v, history, static_cast<int>(m), full, single};
    }
  }
  return std::nullopt;
}

/// Random spot-checks. Each trial draws a stage i, a k-robot history over
/// columns 0..i and a pair (u, v) from column i+1, the column whose
/// information gain the multi-robot bound controls.
inline CovarianceConditionReport check_covariance_condition(const TransectGrid& grid,
                                                            const Hyperparams& h, int trials,
                                                            std::uint64_t seed, int k = 1) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  grid.validate();
  const auto configs = enumerate_configs(grid.n_rows, k);
  boost::random::mt19937_64 rng(seed);
  boost::random::uniform_int_distribution<int> stage(0, grid.n_cols - 2);
  boost::random::uniform_int_distribution<std::size_t> pick(0, configs.size() - 1);
  boost::random::uniform_int_distribution<int> row(0, grid.n_rows - 1);
  CovarianceConditionReport report;
  for (int trial = 0; trial < trials; ++trial) {
    const int i = stage(rng);
    std::vector<RobotConfig> history;
    for (int c = 0; c <= i; ++c) history.push_back(configs[pick(rng)]);
    const Location u{i + 1, row(rng)};
    const Location v{i + 1, row(rng)};
    ++report.tuples;
    if (auto bad = covariance_condition_violation(u, v, history, grid, h)) {
      report.passed = false;
      report.counterexamples.push_back(std::move(*bad));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Theorem checks

inline constexpr double kBoundTolerance = 1e-9;

struct StartCheck {
  RobotConfig start;
  double markov_value = 0.0;   // V~_0(x_0)
  double exact_value = 0.0;    // V*_0(x_0)
  double rollout_value = 0.0;  // entropy of the Markov path
  bool two_sided = true;       // V~ - eps_0 <= V* <= V~
  bool eps_optimal = true;     // 0 <= V* - V^pi~ <= eps_0 (within tolerance)
  bool per_stage = true;       // V~_i - eps_i <= V*_i <= V~_i along the optimal path
};

struct BoundReport {
  BoundParams params;
  int horizon = 0;
  int robots = 1;
  std::vector<double> delta;          // per stage s = 0..t; NaN where undefined
  std::vector<double> epsilon;        // per stage i = 0..t; NaN where undefined
  std::vector<double> epsilon_loose;  // (t - i + 1) * delta(t)
  bool condition_met = false;
  bool isotropic = true;
  std::string condition_note;
  std::optional<CovarianceConditionReport> cov_condition;
  bool verified = false;  // whether theorem checks ran
  std::vector<StartCheck> checks;
  std::size_t violations = 0;
};

/// Bound tables and condition flags; never throws on unmet conditions.
inline BoundReport bound_report(const BoundParams& p, int t, int k) {
  BoundReport r;
  r.params = p;
  r.horizon = t;
  r.robots = k;
  r.isotropic = is_isotropic(p);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (k == 1) {
    r.condition_met = single_robot_condition(p, t);
    if (!r.condition_met) r.condition_note = "sufficient condition unmet: xi >= rho/t";
  } else {
    r.condition_met = r.isotropic && multi_robot_condition(p, t, k);
    if (!r.isotropic) {
      r.condition_note = "multi-robot bound not applicable: l1' != l2'";
    } else if (!r.condition_met) {
      r.condition_note = "sufficient condition unmet: xi >= min(rho/(tk), rho/(4k))";
    }
  }
  for (int s = 0; s <= t; ++s) {
    double d = nan;
    try {
      d = stage_bound(s, k, p);
    } catch (const Error&) {
    }
    r.delta.push_back(d);
  }
  for (int i = 0; i <= t; ++i) {
    double sum = 0.0;
    for (int s = i; s <= t; ++s) sum += r.delta[static_cast<std::size_t>(s)];
    r.epsilon.push_back(sum);
    r.epsilon_loose.push_back(static_cast<double>(t - i + 1) * r.delta.back());
  }
  return r;
}

/// Checks the two-sided value bound and the eps_0-optimality of the Markov
/// rollout for every start configuration. Runs the exhaustive planner, so the
/// instance must fit the search budget.
inline BoundReport verify_theorems(const TransectGrid& grid, const Hyperparams& h, int k,
                                   double budget = kDefaultExactBudget,
                                   int condition_trials = 0, std::uint64_t condition_seed = 0) {
  grid.validate();
  h.validate();
  const int t = grid.horizon();
  BoundReport r = bound_report(bound_params(h, grid.widths()), t, k);
  if (k > 1 && condition_trials > 0) {
    r.cov_condition = check_covariance_condition(grid, h, condition_trials, condition_seed, k);
  }
  if (!r.condition_met) return r;
  if (exact_search_size(grid, k, 1) > budget) {
    throw Error(ErrorCode::kBudgetExceeded, "instance too large for theorem verification");
  }

  const MarkovPolicy policy = plan_markov(grid, h, k);
  const double tol = kBoundTolerance;
  for (const auto& x0 : policy.configs()) {
    StartCheck c;
    c.start = x0;
    c.markov_value = policy.value(0, x0);
    const ExactSolution exact = exact_value_to_go(grid, h, {x0}, budget);
    c.exact_value = exact.value;
    c.rollout_value = path_entropy(rollout(policy, x0), grid, h);
    const double eps0 = r.epsilon.front();
    c.two_sided = c.markov_value - eps0 <= c.exact_value + tol &&
                  c.exact_value <= c.markov_value + tol;
    const double gap = c.exact_value - c.rollout_value;
    c.eps_optimal = gap >= -tol && gap <= eps0 + tol;

    std::vector<RobotConfig> history{x0};
    history.insert(history.end(), exact.continuation.begin(), exact.continuation.end());
    for (int i = 0; i <= t; ++i) {
      const std::vector<RobotConfig> prefix(history.begin(), history.begin() + i + 1);
      const double v_star = exact_value_to_go(grid, h, prefix, budget).value;
      const double v_markov = policy.value(i, prefix.back());
      const double eps_i = r.epsilon[static_cast<std::size_t>(i)];
      if (!(v_markov - eps_i <= v_star + tol && v_star <= v_markov + tol)) c.per_stage = false;
    }
    if (!c.two_sided || !c.eps_optimal || !c.per_stage) ++r.violations;
    r.checks.push_back(std::move(c));
  }
  r.verified = true;
  return r;
}

}  // namespace markov_ipp
