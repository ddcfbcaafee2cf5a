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


// Benchmark harness: synthetic fields, every (policy, k, seed) combination,
// and the ENT / ERR / timing table.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "markov_ipp/errors.hpp"
#include "markov_ipp/field_io.hpp"
#include "markov_ipp/gp.hpp"
#include "markov_ipp/metrics.hpp"
#include "markov_ipp/planners.hpp"
#include "markov_ipp/sampling.hpp"
#include "markov_ipp/transect.hpp"

namespace markov_ipp {

enum class StartMode { kAll, kWorst, kExplicit };

inline StartMode parse_start_mode(std::string_view s) {
  if (s == "all") return StartMode::kAll;
  if (s == "worst" || s == "adversarial-worst") return StartMode::kWorst;
  if (s == "explicit") return StartMode::kExplicit;
  throw Error(ErrorCode::kParseError, "unknown start mode '" + std::string(s) + "'");
}

inline std::string_view to_string(StartMode m) {
  switch (m) {
    case StartMode::kAll: return "all";
    case StartMode::kWorst: return "worst";
    case StartMode::kExplicit: return "explicit";
  }
  return "all";
}

struct ExperimentSpec {
  int n_rows = 5;
  int n_cols = 30;
  double omega1 = 5.0;
  double omega2 = 5.0;
  Hyperparams hyper{40.45, 16.0, 0.1542, 0.0036};
  double prior_mean = 0.0;
  double offset = 10.0;  // added to sampled fields so the ERR normalizer is nonzero
  std::vector<int> robots{1};
  std::vector<PolicyKind> policies{PolicyKind::kMarkov, PolicyKind::kGreedyEntropy,
                                   PolicyKind::kGreedyMi};
  std::vector<std::uint64_t> seeds{1};
  StartMode start_mode = StartMode::kAll;
  std::optional<RobotConfig> start;
  double budget = kDefaultExactBudget;

  TransectGrid grid() const {
    TransectGrid g;
    g.n_rows = n_rows;
    g.n_cols = n_cols;
    g.omega1 = omega1;
    g.omega2 = omega2;
    return g;
  }

  void validate() const {
    grid().validate();
    hyper.validate();
    if (robots.empty() || policies.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "robot counts and policies must be non-empty");
    }
    for (int k : robots) {
      if (k < 1 || k > n_rows) throw Error(ErrorCode::kInvalidArity, "robot count outside [1, r]");
    }
    if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one seed is required");
    if (start_mode == StartMode::kExplicit && !start) {
      throw Error(ErrorCode::kInvalidArgument, "explicit start mode needs a start");
    }
  }

  /// Applies keys from a key=value spec file on top of the current values.
  void apply(const io::KeyValues& kv) {
    auto num = [&kv](const char* key, double& dst) {
      if (auto it = kv.find(key); it != kv.end()) dst = io::parse_double(it->second, key);
    };
    auto integer = [&kv](const char* key, int& dst) {
      if (auto it = kv.find(key); it != kv.end()) {
        dst = static_cast<int>(io::parse_int(it->second, key));
      }
    };
    integer("rows", n_rows);
    integer("cols", n_cols);
    num("omega1", omega1);
    num("omega2", omega2);
    num("ell1", hyper.ell1);
    num("ell2", hyper.ell2);
    num("signal_var", hyper.signal_var);
    num("noise_var", hyper.noise_var);
    num("prior_mean", prior_mean);
    num("offset", offset);
    num("budget", budget);
    if (auto it = kv.find("robots"); it != kv.end()) {
      robots.clear();
      for (const auto& s : io::split(it->second, ',')) {
        robots.push_back(static_cast<int>(io::parse_int(s, "robots")));
      }
    }
    if (auto it = kv.find("policies"); it != kv.end()) {
      policies.clear();
      for (const auto& s : io::split(it->second, ',')) policies.push_back(parse_policy(s));
    }
    if (auto it = kv.find("seeds"); it != kv.end()) {
      seeds.clear();
      for (const auto& s : io::split(it->second, ',')) {
        seeds.push_back(static_cast<std::uint64_t>(io::parse_int(s, "seeds")));
      }
    }
    if (auto it = kv.find("starts"); it != kv.end()) start_mode = parse_start_mode(it->second);
    if (auto it = kv.find("start"); it != kv.end()) start = parse_config(it->second);
  }

  static RobotConfig parse_config(std::string_view text) {
    std::vector<int> rows;
    for (const auto& s : io::split(text, ',')) {
      rows.push_back(static_cast<int>(io::parse_int(s, "start")));
    }
    return RobotConfig::from_unsorted(std::move(rows));
  }
};

struct BenchRow {
  PolicyKind policy = PolicyKind::kMarkov;
  int k = 1;
  int r = 0;
  int c = 0;
  std::uint64_t seed = 0;
  std::string start;  // "all" for averaged rows, otherwise the rows of the start
  double ent = 0.0;
  double err = 0.0;
  double entd = 0.0;
  double errd = 0.0;
  double time = 0.0;        // per start, seconds
  double time_total = 0.0;  // over every evaluated start, seconds
};

inline constexpr const char* kBenchHeader =
    "policy,k,r,C,seed,start,ENT,ERR,ENTD,ERRD,time,time_total";

inline std::string bench_row_csv(const BenchRow& row) {
  std::string s(to_string(row.policy));
  s += ',' + std::to_string(row.k) + ',' + std::to_string(row.r) + ',' + std::to_string(row.c);
  s += ',' + std::to_string(row.seed) + ',' + row.start;
  for (double v : {row.ent, row.err, row.entd, row.errd, row.time, row.time_total}) {
    s += ',' + io::format_double(v);
  }
  return s;
}

namespace detail {

struct StartEval {
  EvalRecord record;
  MetricDiff diff;
};

}  // namespace detail

/// Evaluates every requested policy on one field for one robot count.
/// `grid.measurements` must hold the ground truth; `eval_mean` is the prior
/// mean used for ERR predictions.
inline std::vector<BenchRow> bench_field(const ExperimentSpec& spec, const TransectGrid& grid,
                                         int k, std::uint64_t seed, double eval_mean,
                                         const std::string& instance) {
  using clock = std::chrono::steady_clock;
  std::vector<RobotConfig> starts;
  if (spec.start_mode == StartMode::kExplicit) {
    starts.push_back(*spec.start);
  } else {
    starts = enumerate_configs(grid.n_rows, k);
  }

  const auto t0 = clock::now();
  const MarkovPolicy policy = plan_markov(grid, spec.hyper, k);
  const double markov_plan_time = std::chrono::duration<double>(clock::now() - t0).count();

  auto evaluate = [&](PolicyKind kind, const RobotConfig& x0, const ObservationPath& path,
                      double time) {
    EvalRecord rec;
    rec.kind = kind;
    rec.start = x0;
    rec.instance = instance;
    rec.ent = ent_metric(path, grid, spec.hyper);
    rec.err = err_metric(path, grid, spec.hyper, eval_mean);
    rec.plan_wall_time = time;
    return rec;
  };

  std::vector<EvalRecord> markov_records;
  double rollout_total = 0.0;
  for (const auto& x0 : starts) {
    const auto t1 = clock::now();
    const ObservationPath path = rollout(policy, x0);
    const double dt = std::chrono::duration<double>(clock::now() - t1).count();
    rollout_total += dt;
    markov_records.push_back(
        evaluate(PolicyKind::kMarkov, x0, path,
                 markov_plan_time / static_cast<double>(starts.size()) + dt));
  }

  std::vector<BenchRow> rows;
  for (PolicyKind kind : spec.policies) {
    std::vector<detail::StartEval> evals;
    double total_time = 0.0;
    for (std::size_t s = 0; s < starts.size(); ++s) {
      EvalRecord rec;
      if (kind == PolicyKind::kMarkov) {
        rec = markov_records[s];
      } else {
        const PlanResult res = plan(kind, grid, spec.hyper, starts[s], spec.budget);
        rec = evaluate(kind, starts[s], res.path, res.wall_time);
        total_time += res.wall_time;
      }
      evals.push_back({rec, diff_metrics(markov_records[s], rec)});
    }
    if (kind == PolicyKind::kMarkov) total_time = markov_plan_time + rollout_total;

    BenchRow row;
    row.policy = kind;
    row.k = k;
    row.r = grid.n_rows;
    row.c = grid.n_cols;
    row.seed = seed;
    row.time_total = total_time;
    if (spec.start_mode == StartMode::kAll) {
      row.start = "all";
      const double n = static_cast<double>(evals.size());
      for (const auto& e : evals) {
        row.ent += e.record.ent / n;
        row.err += e.record.err / n;
        row.entd += e.diff.entd / n;
        row.errd += e.diff.errd / n;
        row.time += e.record.plan_wall_time / n;
      }
    } else {
      // Worst start: the one leaving the highest mapping uncertainty.
      std::size_t pick = 0;
      for (std::size_t s = 1; s < evals.size(); ++s) {
        if (evals[s].record.ent > evals[pick].record.ent) pick = s;
      }
      const auto& e = evals[pick];
      row.start = e.record.start.to_string();
      row.ent = e.record.ent;
      row.err = e.record.err;
      row.entd = e.diff.entd;
      row.errd = e.diff.errd;
      row.time = e.record.plan_wall_time;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Runs the full synthetic campaign. Rows are ordered by (k, seed, policy
/// list order).
inline std::vector<BenchRow> run_benchmark(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<BenchRow> rows;
  TransectGrid grid = spec.grid();
  for (int k : spec.robots) {
    for (std::uint64_t seed : spec.seeds) {
      Eigen::MatrixXd field = sample_prior_field(grid, spec.hyper, spec.prior_mean, seed);
      field.array() += spec.offset;
      grid.measurements = field;
      auto part = bench_field(spec, grid, k, seed, spec.prior_mean + spec.offset,
                              "seed:" + std::to_string(seed));
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  return rows;
}

}  // namespace markov_ipp
