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


// Path planners for the transect sampling task.
//
//   plan_markov         backward induction where each stage conditions only on
//                       the previous column; one policy table serves every start.
//   plan_exact          exhaustive search over action sequences with full-history
//                       conditioning. Exponential in the horizon; used as oracle.
//   plan_greedy_entropy one-step lookahead on the full-history entropy.
//   plan_greedy_mi      one-step lookahead on the mutual-information gain with
//                       respect to the rest of the grid.
//
// Ties are broken toward the lexicographically smallest action everywhere.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "markov_ipp/errors.hpp"
#include "markov_ipp/gp.hpp"
#include "markov_ipp/sampling.hpp"
#include "markov_ipp/transect.hpp"

namespace markov_ipp {

enum class PolicyKind { kMarkov, kExact, kGreedyEntropy, kGreedyMi };

inline std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kMarkov: return "markov";
    case PolicyKind::kExact: return "exact";
    case PolicyKind::kGreedyEntropy: return "greedy-ent";
    case PolicyKind::kGreedyMi: return "greedy-mi";
  }
  return "unknown";
}

inline PolicyKind parse_policy(std::string_view name) {
  for (auto kind : {PolicyKind::kMarkov, PolicyKind::kExact,
                    PolicyKind::kGreedyEntropy, PolicyKind::kGreedyMi}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::kParseError, "unknown policy '" + std::string(name) + "'");
}

struct PlanResult {
  ObservationPath path;
  double value = 0.0;  // nats
  PolicyKind kind = PolicyKind::kMarkov;
  double wall_time = 0.0;  // seconds
};

/// Default cap on the number of complete action sequences plan_exact visits.
inline constexpr double kDefaultExactBudget = 1e7;

namespace detail {

/// Relative slack under which two scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

inline bool improves(double candidate, double best) {
  if (!std::isfinite(best)) return candidate > best;
  return candidate > best + kTieTolerance * std::max(1.0, std::abs(best));
}

/// Lower Cholesky factor of the covariance of a growing measurement history.
/// Appending a block costs one triangular solve plus a k x k factorization of
/// the Schur complement, whose log-determinant is the block's conditional
/// entropy.
class HistoryFactor {
 public:
  HistoryFactor(const Hyperparams& h, const Widths& w, Eigen::Index capacity)
      : h_(h), w_(w), lower_(Eigen::MatrixXd::Zero(capacity, capacity)) {}

  struct Extension {
    Eigen::MatrixXd coupling;  // k x n
    Cholesky schur;            // factor of Sigma_bb|history
    double entropy = 0.0;      // H[Z_block | Z_history]
  };

  Eigen::Index size() const { return static_cast<Eigen::Index>(locs_.size()); }
  const LocationList& locations() const { return locs_; }

  Extension extend(const LocationList& block) const {
    Extension e;
    CovMatrix s = cov_matrix(block, h_, w_);
    const Eigen::Index n = size();
    if (n > 0) {
      Eigen::MatrixXd v = cross_cov(locs_, block, h_, w_);
      lower_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solveInPlace(v);
      s -= v.transpose() * v;
      e.coupling = v.transpose();
    } else {
      e.coupling.resize(static_cast<Eigen::Index>(block.size()), 0);
    }
    e.schur = robust_cholesky(0.5 * (s + s.transpose()));
    e.entropy = gaussian_entropy(e.schur);
    return e;
  }

  void push(const LocationList& block, const Extension& e) {
    const Eigen::Index n = size();
    const auto k = static_cast<Eigen::Index>(block.size());
    if (n + k > lower_.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "history factor capacity exceeded");
    }
    lower_.block(n, 0, k, n) = e.coupling;
    lower_.block(n, n, k, k) = e.schur.lower;
    locs_.insert(locs_.end(), block.begin(), block.end());
  }

  void pop(std::size_t k) {
    const Eigen::Index n = size();
    const auto kk = static_cast<Eigen::Index>(k);
    lower_.block(n - kk, 0, kk, n).setZero();
    locs_.resize(locs_.size() - k);
  }

 private:
  Hyperparams h_;
  Widths w_;
  Eigen::MatrixXd lower_;
  LocationList locs_;
};

inline void check_start(const TransectGrid& grid, const RobotConfig& x0) {
  if (x0.robots() < 1 || x0.robots() > grid.n_rows) {
    throw Error(ErrorCode::kInvalidArity, "robot count must lie in [1, r]");
  }
  if (!x0.fits(grid.n_rows)) {
    throw Error(ErrorCode::kInvalidArgument, "start configuration exceeds grid rows");
  }
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Path evaluation

/// H[Z_{x_1..x_{t+1}} | Z_{x_0}]: entropy of everything after the start column.
inline double path_entropy(const ObservationPath& path, const TransectGrid& grid,
                           const Hyperparams& h) {
  path.validate(grid);
  const Widths w = grid.widths();
  const LocationList all = path_locations(path);
  const LocationList start = config_locations(path.configs.front(), 0);
  return gaussian_entropy(cov_matrix(all, h, w)) -
         gaussian_entropy(cov_matrix(start, h, w));
}

// ---------------------------------------------------------------------------
// Markov planner

/// H[Z_{a in column i+1} | Z_{x in column i}] for every (x, a) pair. The
/// covariance is stationary, so the table computed between columns 0 and 1 is
/// valid between any two adjacent columns.
struct StagewiseEntropyTable {
  std::vector<RobotConfig> configs;
  Eigen::MatrixXd entropy;  // rows: current config, cols: action

  static StagewiseEntropyTable build(const TransectGrid& grid, const Hyperparams& h,
                                     int k) {
    StagewiseEntropyTable t;
    t.configs = enumerate_configs(grid.n_rows, k);
    const auto n = static_cast<Eigen::Index>(t.configs.size());
    t.entropy.resize(n, n);
    const Widths w = grid.widths();
    for (Eigen::Index x = 0; x < n; ++x) {
      detail::HistoryFactor factor(h, w, k);
      const LocationList cur = config_locations(t.configs[static_cast<std::size_t>(x)], 0);
      factor.push(cur, factor.extend(cur));
      for (Eigen::Index a = 0; a < n; ++a) {
        t.entropy(x, a) =
            factor.extend(config_locations(t.configs[static_cast<std::size_t>(a)], 1)).entropy;
      }
    }
    return t;
  }
};

/// Stage-indexed action and value tables over every configuration.
struct MarkovPolicy {
  int n_rows = 0;
  int robots = 0;
  int horizon = 0;  // t; stages run 0..t
  StagewiseEntropyTable table;
  std::vector<std::vector<std::size_t>> action_table;  // [stage][config] -> action index
  std::vector<std::vector<double>> value_table;        // [stage][config], stages 0..t

  const std::vector<RobotConfig>& configs() const { return table.configs; }

  std::size_t index_of(const RobotConfig& x) const {
    const auto& cs = configs();
    auto it = std::lower_bound(cs.begin(), cs.end(), x);
    if (it == cs.end() || *it != x) {
      throw Error(ErrorCode::kInvalidArgument,
                  "configuration {" + x.to_string() + "} not in policy domain");
    }
    return static_cast<std::size_t>(it - cs.begin());
  }

  const RobotConfig& action(int stage, const RobotConfig& x) const {
    return configs()[action_table.at(static_cast<std::size_t>(stage))[index_of(x)]];
  }

  /// Optimal Markov value-to-go; zero past the last stage.
  double value(int stage, const RobotConfig& x) const {
    if (stage == horizon + 1) return 0.0;
    return value_table.at(static_cast<std::size_t>(stage))[index_of(x)];
  }
};

inline MarkovPolicy plan_markov(const TransectGrid& grid, const Hyperparams& h, int k) {
  grid.validate();
  h.validate();
  MarkovPolicy p;
  p.n_rows = grid.n_rows;
  p.robots = k;
  p.horizon = grid.horizon();
  p.table = StagewiseEntropyTable::build(grid, h, k);
  const std::size_t n = p.table.configs.size();
  const auto stages = static_cast<std::size_t>(p.horizon + 1);
  p.action_table.assign(stages, std::vector<std::size_t>(n, 0));
  p.value_table.assign(stages, std::vector<double>(n, 0.0));

  std::vector<double> next(n, 0.0);
  for (std::size_t s = stages; s-- > 0;) {
    for (std::size_t x = 0; x < n; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_a = 0;
      for (std::size_t a = 0; a < n; ++a) {
        const double q = p.table.entropy(static_cast<Eigen::Index>(x),
                                         static_cast<Eigen::Index>(a)) + next[a];
        if (detail::improves(q, best)) {
          best = q;
          best_a = a;
        }
      }
      p.action_table[s][x] = best_a;
      p.value_table[s][x] = best;
    }
    next = p.value_table[s];
  }
  return p;
}

inline ObservationPath rollout(const MarkovPolicy& policy, const RobotConfig& x0) {
  ObservationPath path;
  path.configs.reserve(static_cast<std::size_t>(policy.horizon + 2));
  std::size_t x = policy.index_of(x0);
  path.configs.push_back(x0);
  for (int s = 0; s <= policy.horizon; ++s) {
    x = policy.action_table[static_cast<std::size_t>(s)][x];
    path.configs.push_back(policy.configs()[x]);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Exact non-Markovian planner

struct ExactSolution {
  double value = 0.0;                        // max sum of full-history stage entropies
  std::vector<RobotConfig> continuation;     // configs for columns i+1..C-1
  double leaves = 0.0;                       // complete sequences examined
};

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const TransectGrid& grid, const Hyperparams& h,
              const std::vector<RobotConfig>& actions)
      : grid_(grid),
        actions_(actions),
        factor_(h, grid.widths(),
                static_cast<Eigen::Index>(grid.n_cols) * actions.front().robots()) {}

  ExactSolution run(const std::vector<RobotConfig>& history) {
    for (std::size_t c = 0; c < history.size(); ++c) {
      const LocationList block = config_locations(history[c], static_cast<int>(c));
      factor_.push(block, factor_.extend(block));
    }
    best_ = -std::numeric_limits<double>::infinity();
    sequence_.clear();
    descend(static_cast<int>(history.size()), 0.0);
    return {best_, best_sequence_, leaves_};
  }

 private:
  void descend(int col, double running) {
    if (col == grid_.n_cols) {
      leaves_ += 1.0;
      if (improves(running, best_)) {
        best_ = running;
        best_sequence_ = sequence_;
      }
      return;
    }
    for (const auto& a : actions_) {
      const LocationList block = config_locations(a, col);
      const auto ext = factor_.extend(block);
      factor_.push(block, ext);
      sequence_.push_back(a);
      descend(col + 1, running + ext.entropy);
      sequence_.pop_back();
      factor_.pop(block.size());
    }
  }

  const TransectGrid& grid_;
  const std::vector<RobotConfig>& actions_;
  HistoryFactor factor_;
  std::vector<RobotConfig> sequence_;
  std::vector<RobotConfig> best_sequence_;
  double best_ = 0.0;
  double leaves_ = 0.0;
};

}  // namespace detail

/// Number of complete action sequences below a history of `known_cols` columns.
inline double exact_search_size(const TransectGrid& grid, int k, int known_cols) {
  return std::pow(binomial(grid.n_rows, k), grid.n_cols - known_cols);
}

/// Maximum full-history value-to-go after the observed prefix `history`
/// (configs for columns 0..i). With a one-column history this is V*_0(x_0).
inline ExactSolution exact_value_to_go(const TransectGrid& grid, const Hyperparams& h,
                                       const std::vector<RobotConfig>& history,
                                       double budget = kDefaultExactBudget) {
  grid.validate();
  h.validate();
  if (history.empty() || static_cast<int>(history.size()) >= grid.n_cols) {
    throw Error(ErrorCode::kInvalidArgument, "history must cover columns 0..i with i <= t");
  }
  const int k = history.front().robots();
  for (const auto& c : history) detail::check_start(grid, c);
  const double size = exact_search_size(grid, k, static_cast<int>(history.size()));
  if (size > budget) {
    throw Error(ErrorCode::kBudgetExceeded,
                "exhaustive search needs " + std::to_string(size) + " leaves");
  }
  const auto actions = enumerate_configs(grid.n_rows, k);
  detail::ExactSearch search(grid, h, actions);
  return search.run(history);
}

inline PlanResult plan_exact(const TransectGrid& grid, const Hyperparams& h,
                             const RobotConfig& x0, double budget = kDefaultExactBudget) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_start(grid, x0);
  ExactSolution sol = exact_value_to_go(grid, h, {x0}, budget);
  PlanResult out;
  out.kind = PolicyKind::kExact;
  out.path.configs.push_back(x0);
  out.path.configs.insert(out.path.configs.end(), sol.continuation.begin(),
                          sol.continuation.end());
  out.value = sol.value;
  out.wall_time = detail::seconds_since(start);
  return out;
}

// ---------------------------------------------------------------------------
// Greedy planners

inline PlanResult plan_greedy_entropy(const TransectGrid& grid, const Hyperparams& h,
                                      const RobotConfig& x0) {
  const auto start = std::chrono::steady_clock::now();
  grid.validate();
  h.validate();
  detail::check_start(grid, x0);
  const int k = x0.robots();
  const auto actions = enumerate_configs(grid.n_rows, k);
  detail::HistoryFactor factor(h, grid.widths(),
                               static_cast<Eigen::Index>(grid.n_cols) * k);
  PlanResult out;
  out.kind = PolicyKind::kGreedyEntropy;
  out.path.configs.push_back(x0);
  {
    const LocationList block = config_locations(x0, 0);
    factor.push(block, factor.extend(block));
  }
  for (int col = 1; col < grid.n_cols; ++col) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_a = 0;
    std::optional<detail::HistoryFactor::Extension> best_ext;
    for (std::size_t a = 0; a < actions.size(); ++a) {
      auto ext = factor.extend(config_locations(actions[a], col));
      if (detail::improves(ext.entropy, best)) {
        best = ext.entropy;
        best_a = a;
        best_ext = std::move(ext);
      }
    }
    factor.push(config_locations(actions[best_a], col), *best_ext);
    out.path.configs.push_back(actions[best_a]);
  }
  out.value = path_entropy(out.path, grid, h);
  out.wall_time = detail::seconds_since(start);
  return out;
}

/// One-step mutual-information scores of every action from the history
/// `visited`: H[Z_a | Z_visited] - H[Z_a | Z_rest], where rest is the grid
/// minus the visited locations and minus a. The second term comes from the
/// precision matrix of all unvisited locations: Sigma_{a|rest} is the inverse
/// of that matrix's (a, a) block.
inline std::vector<double> greedy_mi_scores(const TransectGrid& grid, const Hyperparams& h,
                                            const LocationList& visited,
                                            const std::vector<RobotConfig>& actions,
                                            int col) {
  const Widths w = grid.widths();
  LocationList rest;
  for (const auto& l : grid.all_locations()) {
    if (std::find(visited.begin(), visited.end(), l) == visited.end()) rest.push_back(l);
  }
  const Cholesky rest_chol = robust_cholesky(cov_matrix(rest, h, w));
  const Eigen::MatrixXd precision =
      rest_chol.solve(Eigen::MatrixXd::Identity(rest_chol.size(), rest_chol.size()));

  const Cholesky hist_chol = robust_cholesky(cov_matrix(visited, h, w));
  std::vector<double> scores;
  scores.reserve(actions.size());
  for (const auto& a : actions) {
    const LocationList block = config_locations(a, col);
    Eigen::MatrixXd v = cross_cov(visited, block, h, w);
    hist_chol.solve_lower_in_place(v);
    CovMatrix s = cov_matrix(block, h, w) - v.transpose() * v;
    const double given_history = gaussian_entropy(CovMatrix(0.5 * (s + s.transpose())));

    std::vector<Eigen::Index> idx;
    for (const auto& l : block) {
      idx.push_back(std::find(rest.begin(), rest.end(), l) - rest.begin());
    }
    const auto kk = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd p_aa(kk, kk);
    for (Eigen::Index i = 0; i < kk; ++i) {
      for (Eigen::Index j = 0; j < kk; ++j) p_aa(i, j) = precision(idx[i], idx[j]);
    }
    const double given_rest =
        0.5 * (static_cast<double>(kk) * kLog2PiE - robust_cholesky(p_aa).log_det());
    scores.push_back(given_history - given_rest);
  }
  return scores;
}

inline PlanResult plan_greedy_mi(const TransectGrid& grid, const Hyperparams& h,
                                 const RobotConfig& x0) {
  const auto start = std::chrono::steady_clock::now();
  grid.validate();
  h.validate();
  detail::check_start(grid, x0);
  check_dense_size(grid.size());
  const auto actions = enumerate_configs(grid.n_rows, x0.robots());
  PlanResult out;
  out.kind = PolicyKind::kGreedyMi;
  out.path.configs.push_back(x0);
  LocationList visited = config_locations(x0, 0);
  for (int col = 1; col < grid.n_cols; ++col) {
    const auto scores = greedy_mi_scores(grid, h, visited, actions, col);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_a = 0;
    for (std::size_t a = 0; a < scores.size(); ++a) {
      if (detail::improves(scores[a], best)) {
        best = scores[a];
        best_a = a;
      }
    }
    out.path.configs.push_back(actions[best_a]);
    const LocationList block = config_locations(actions[best_a], col);
    visited.insert(visited.end(), block.begin(), block.end());
  }
  out.value = path_entropy(out.path, grid, h);
  out.wall_time = detail::seconds_since(start);
  return out;
}

/// Runs a Markov plan and rolls it out from `x0`. The reported value is the
/// Markov objective V~_0(x_0); wall time covers planning and rollout.
inline PlanResult plan_markov_from(const TransectGrid& grid, const Hyperparams& h,
                                   const RobotConfig& x0) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_start(grid, x0);
  const MarkovPolicy policy = plan_markov(grid, h, x0.robots());
  PlanResult out;
  out.kind = PolicyKind::kMarkov;
  out.path = rollout(policy, x0);
  out.value = policy.value(0, x0);
  out.wall_time = detail::seconds_since(start);
  return out;
}

inline PlanResult plan(PolicyKind kind, const TransectGrid& grid, const Hyperparams& h,
                       const RobotConfig& x0, double budget = kDefaultExactBudget) {
  switch (kind) {
    case PolicyKind::kMarkov: return plan_markov_from(grid, h, x0);
    case PolicyKind::kExact: return plan_exact(grid, h, x0, budget);
    case PolicyKind::kGreedyEntropy: return plan_greedy_entropy(grid, h, x0);
    case PolicyKind::kGreedyMi: return plan_greedy_mi(grid, h, x0);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown policy kind");
}

}  // namespace markov_ipp
