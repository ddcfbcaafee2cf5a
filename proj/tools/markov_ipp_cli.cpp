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


// markov-ipp: command line front end.
//
//   markov-ipp synth  --out field.csv [--preset temperature] [--seed 7]
//   markov-ipp plan   --field field.csv --policy markov -k 1 [--start 2]
//   markov-ipp bench  [--spec bench.cfg] [--robots 1,2] [--seeds 1,2,3]
//   markov-ipp bounds --field field.csv -k 1
//
// Exit codes: 0 ok, 1 other error, 2 parse error, 3 condition violated,
// 4 budget exceeded, 5 factorization failure, 6 invalid arity,
// 7 grid too large, 8 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "markov_ipp/markov_ipp.hpp"

namespace {

using json = nlohmann::json;
using namespace markov_ipp;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return 2;
    case ErrorCode::kConditionViolated:
    case ErrorCode::kAnisotropyViolated: return 3;
    case ErrorCode::kBudgetExceeded: return 4;
    case ErrorCode::kFactorizationFailure:
    case ErrorCode::kSingularCovariance: return 5;
    case ErrorCode::kInvalidArity: return 6;
    case ErrorCode::kGridTooLarge: return 7;
    case ErrorCode::kIoError: return 8;
    default: return 1;
  }
}

/// Model flags shared by subcommands. Unset flags fall back to the sidecar,
/// then to built-in defaults.
struct ModelFlags {
  std::optional<double> ell1, ell2, signal_var, noise_var, mean, omega1, omega2;

  void add_to(CLI::App* app) {
    app->add_option("--ell1", ell1, "horizontal length-scale (m)");
    app->add_option("--ell2", ell2, "vertical length-scale (m)");
    app->add_option("--signal-var", signal_var, "signal variance");
    app->add_option("--noise-var", noise_var, "noise variance");
    app->add_option("--mean", mean, "constant prior mean");
    app->add_option("--omega1", omega1, "horizontal grid width (m)");
    app->add_option("--omega2", omega2, "vertical grid width (m)");
  }

  void apply(Hyperparams& h, double& w1, double& w2) const {
    if (ell1) h.ell1 = *ell1;
    if (ell2) h.ell2 = *ell2;
    if (signal_var) h.signal_var = *signal_var;
    if (noise_var) h.noise_var = *noise_var;
    if (omega1) w1 = *omega1;
    if (omega2) w2 = *omega2;
  }
};

/// Grid and model resolved from a field file plus overrides.
struct ResolvedField {
  TransectGrid grid;
  Hyperparams hyper;
  double prior_mean = 0.0;
};

ResolvedField resolve_field(const std::string& path, const ModelFlags& flags) {
  io::LoadedField loaded = io::load_field(path);
  ResolvedField r;
  r.grid = std::move(loaded.grid);
  r.hyper = ExperimentSpec{}.hyper;
  r.prior_mean = r.grid.measurements->mean();
  if (loaded.meta) {
    r.hyper = loaded.meta->hyper;
    r.prior_mean = loaded.meta->prior_mean;
  }
  flags.apply(r.hyper, r.grid.omega1, r.grid.omega2);
  if (flags.mean) r.prior_mean = *flags.mean;
  r.grid.validate();
  r.hyper.validate();
  if (!r.grid.is_elongated()) {
    std::cerr << "warning: grid has no more columns than rows\n";
  }
  return r;
}

json config_json(const RobotConfig& c) { return json(c.rows()); }

json path_json(const ObservationPath& p) {
  json a = json::array();
  for (const auto& c : p.configs) a.push_back(config_json(c));
  return a;
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return nullptr;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    io::write_text(out, text);
  }
}

// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string out;
  std::string preset = "temperature";
  std::optional<int> rows, cols;
  std::uint64_t seed = 1;
  ModelFlags model;
};

int run_synth(const SynthOptions& o) {
  io::FieldMetadata meta;
  if (o.preset == "temperature") {
    // 25 m x 150 m transect on a 5 x 30 grid.
    meta.n_rows = 5;
    meta.n_cols = 30;
    meta.omega1 = 5.0;
    meta.omega2 = 5.0;
    meta.hyper = {40.45, 16.00, 0.1542, 0.0036};
  } else if (o.preset == "plankton") {
    // 314 m x 1765 m transect on an 8 x 45 grid.
    meta.n_rows = 8;
    meta.n_cols = 45;
    meta.omega1 = 1765.0 / 45.0;
    meta.omega2 = 314.0 / 8.0;
    meta.hyper = {27.53, 134.64, 2.152, 0.041};
  } else {
    throw Error(ErrorCode::kParseError, "unknown preset '" + o.preset + "'");
  }
  if (o.rows) meta.n_rows = *o.rows;
  if (o.cols) meta.n_cols = *o.cols;
  o.model.apply(meta.hyper, meta.omega1, meta.omega2);
  meta.prior_mean = o.model.mean.value_or(0.0);
  meta.seed = o.seed;

  TransectGrid grid;
  grid.n_rows = meta.n_rows;
  grid.n_cols = meta.n_cols;
  grid.omega1 = meta.omega1;
  grid.omega2 = meta.omega2;
  const Eigen::MatrixXd field = sample_prior_field(grid, meta.hyper, meta.prior_mean, o.seed);
  const std::string checksum = io::write_field(o.out, field, meta);
  std::cout << "field=" << o.out << "\n"
            << "sidecar=" << io::sidecar_path(o.out).string() << "\n"
            << "rows=" << meta.n_rows << "\ncols=" << meta.n_cols << "\n"
            << "checksum=fnv1a64:" << checksum << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct PlanOptions {
  std::string field;
  std::string policy = "markov";
  int robots = 1;
  std::string start;
  double budget = kDefaultExactBudget;
  bool no_timing = false;
  std::string out;
  ModelFlags model;
};

int run_plan(const PlanOptions& o) {
  const ResolvedField f = resolve_field(o.field, o.model);
  const PolicyKind kind = parse_policy(o.policy);
  json report;
  report["policy"] = std::string(to_string(kind));
  report["robots"] = o.robots;
  report["rows"] = f.grid.n_rows;
  report["cols"] = f.grid.n_cols;
  auto timing = [&o](double t) { return o.no_timing ? 0.0 : t; };

  if (o.start.empty()) {
    if (kind != PolicyKind::kMarkov) {
      throw Error(ErrorCode::kInvalidArgument, "--start is required for non-Markov policies");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const MarkovPolicy policy = plan_markov(f.grid, f.hyper, o.robots);
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report["wall_time"] = timing(dt);
    json stages = json::array();
    for (int s = 0; s <= policy.horizon; ++s) {
      json entries = json::array();
      for (const auto& x : policy.configs()) {
        entries.push_back({{"config", config_json(x)},
                           {"action", config_json(policy.action(s, x))},
                           {"value", policy.value(s, x)}});
      }
      stages.push_back({{"stage", s}, {"entries", std::move(entries)}});
    }
    report["value_table"] = std::move(stages);
  } else {
    const RobotConfig x0 = ExperimentSpec::parse_config(o.start);
    if (x0.robots() != o.robots) {
      throw Error(ErrorCode::kInvalidArity, "--start lists a different number of robots than -k");
    }
    const PlanResult res = plan(kind, f.grid, f.hyper, x0, o.budget);
    report["start"] = config_json(x0);
    report["path"] = path_json(res.path);
    report["value"] = res.value;
    report["path_entropy"] = path_entropy(res.path, f.grid, f.hyper);
    report["wall_time"] = timing(res.wall_time);
    if (res.path.configs.size() < f.grid.size()) {
      report["ent"] = ent_metric(res.path, f.grid, f.hyper);
    }
  }
  emit(report.dump(2) + "\n", o.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchOptions {
  std::string spec_file;
  std::string field;
  std::optional<int> rows, cols;
  std::optional<double> offset, budget;
  std::string robots, policies, seeds, starts, start;
  std::string out;
  ModelFlags model;
};

int run_bench(const BenchOptions& o) {
  ExperimentSpec spec;
  if (!o.spec_file.empty()) spec.apply(io::parse_key_values(io::read_text(o.spec_file)));
  io::KeyValues overrides;
  if (o.rows) overrides["rows"] = std::to_string(*o.rows);
  if (o.cols) overrides["cols"] = std::to_string(*o.cols);
  if (o.offset) overrides["offset"] = io::format_double(*o.offset);
  if (o.budget) overrides["budget"] = io::format_double(*o.budget);
  if (o.model.mean) overrides["prior_mean"] = io::format_double(*o.model.mean);
  if (!o.robots.empty()) overrides["robots"] = o.robots;
  if (!o.policies.empty()) overrides["policies"] = o.policies;
  if (!o.seeds.empty()) overrides["seeds"] = o.seeds;
  if (!o.starts.empty()) overrides["starts"] = o.starts;
  if (!o.start.empty()) overrides["start"] = o.start;
  spec.apply(overrides);
  o.model.apply(spec.hyper, spec.omega1, spec.omega2);

  std::vector<BenchRow> rows;
  if (o.field.empty()) {
    rows = run_benchmark(spec);
  } else {
    const ResolvedField f = resolve_field(o.field, o.model);
    spec.n_rows = f.grid.n_rows;
    spec.n_cols = f.grid.n_cols;
    spec.omega1 = f.grid.omega1;
    spec.omega2 = f.grid.omega2;
    spec.hyper = f.hyper;
    spec.validate();
    for (int k : spec.robots) {
      auto part = bench_field(spec, f.grid, k, 0, f.prior_mean, o.field);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  std::string csv = std::string(kBenchHeader) + "\n";
  for (const auto& r : rows) csv += bench_row_csv(r) + "\n";
  emit(csv, o.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct BoundsOptions {
  std::string field;
  int robots = 1;
  std::optional<int> horizon;
  std::optional<int> rows;
  double budget = kDefaultExactBudget;
  int condition_trials = 200;
  std::uint64_t seed = 1;
  std::string out;
  ModelFlags model;
};

json bound_report_json(const BoundReport& r) {
  json j;
  j["xi"] = r.params.xi;
  j["rho"] = r.params.rho;
  j["noise_to_signal"] = r.params.noise_to_signal;
  j["ell1_norm"] = r.params.ell1_norm;
  j["ell2_norm"] = r.params.ell2_norm;
  j["horizon"] = r.horizon;
  j["robots"] = r.robots;
  j["condition_met"] = r.condition_met;
  j["isotropic"] = r.isotropic;
  if (!r.condition_note.empty()) j["condition_note"] = r.condition_note;
  json delta = json::array(), eps = json::array(), loose = json::array();
  for (double d : r.delta) delta.push_back(finite_or_null(d));
  for (double e : r.epsilon) eps.push_back(finite_or_null(e));
  for (double e : r.epsilon_loose) loose.push_back(finite_or_null(e));
  j["delta"] = std::move(delta);
  j["epsilon"] = std::move(eps);
  j["epsilon_loose"] = std::move(loose);
  if (r.cov_condition) {
    j["covariance_condition"] = {
        {"passed", r.cov_condition->passed},
        {"tuples", r.cov_condition->tuples},
        {"counterexamples", r.cov_condition->counterexamples.size()}};
  }
  if (r.verified) {
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"start", config_json(c.start)},
                        {"markov_value", c.markov_value},
                        {"exact_value", c.exact_value},
                        {"rollout_value", c.rollout_value},
                        {"two_sided_bound", c.two_sided ? "pass" : "FAIL"},
                        {"eps_optimality", c.eps_optimal ? "pass" : "FAIL"},
                        {"per_stage_bound", c.per_stage ? "pass" : "FAIL"}});
    }
    j["verification"] = {{"status", "verified"},
                         {"violations", r.violations},
                         {"checks", std::move(checks)}};
  } else {
    j["verification"] = {{"status", r.condition_met ? "skipped" : "not applicable"}};
  }
  return j;
}

int run_bounds(const BoundsOptions& o) {
  BoundReport report;
  if (!o.field.empty()) {
    const ResolvedField f = resolve_field(o.field, o.model);
    TransectGrid grid = f.grid;
    if (o.horizon) grid.n_cols = *o.horizon + 2;
    if (exact_search_size(grid, o.robots, 1) <= o.budget) {
      report = verify_theorems(grid, f.hyper, o.robots, o.budget,
                               o.robots > 1 ? o.condition_trials : 0, o.seed);
    } else {
      report = bound_report(bound_params(f.hyper, grid.widths()), grid.horizon(), o.robots);
    }
  } else {
    Hyperparams h = ExperimentSpec{}.hyper;
    double w1 = 5.0, w2 = 5.0;
    o.model.apply(h, w1, w2);
    const int t = o.horizon.value_or(28);
    if (o.rows) {
      TransectGrid grid;
      grid.n_rows = *o.rows;
      grid.n_cols = t + 2;
      grid.omega1 = w1;
      grid.omega2 = w2;
      if (exact_search_size(grid, o.robots, 1) <= o.budget) {
        report = verify_theorems(grid, h, o.robots, o.budget,
                                 o.robots > 1 ? o.condition_trials : 0, o.seed);
      } else {
        report = bound_report(bound_params(h, grid.widths()), t, o.robots);
      }
    } else {
      report = bound_report(bound_params(h, {w1, w2}), t, o.robots);
    }
  }
  emit(bound_report_json(report).dump(2) + "\n", o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov information-theoretic path planning for transect sampling"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "sample a synthetic field from the GP prior");
  s->add_option("--out", synth.out, "output CSV path")->required();
  s->add_option("--preset", synth.preset, "temperature | plankton");
  s->add_option("--rows", synth.rows);
  s->add_option("--cols", synth.cols);
  s->add_option("--seed", synth.seed);
  synth.model.add_to(s);

  PlanOptions plan_opts;
  auto* p = app.add_subcommand("plan", "plan observation paths on a field");
  p->add_option("--field", plan_opts.field, "field CSV")->required();
  p->add_option("--policy", plan_opts.policy, "markov | exact | greedy-ent | greedy-mi");
  p->add_option("-k,--robots", plan_opts.robots);
  p->add_option("--start", plan_opts.start, "comma-separated start rows");
  p->add_option("--budget", plan_opts.budget, "leaf budget for the exact planner");
  p->add_flag("--no-timing", plan_opts.no_timing, "report zero wall times");
  p->add_option("--out", plan_opts.out);
  plan_opts.model.add_to(p);

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "run the policy comparison harness");
  b->add_option("--spec", bench.spec_file, "key=value experiment file");
  b->add_option("--field", bench.field, "evaluate on this field instead of sampling");
  b->add_option("--rows", bench.rows);
  b->add_option("--cols", bench.cols);
  b->add_option("-k,--robots", bench.robots, "comma-separated robot counts");
  b->add_option("--policies", bench.policies, "comma-separated policies");
  b->add_option("--seed,--seeds", bench.seeds, "comma-separated seeds");
  b->add_option("--starts", bench.starts, "all | worst | explicit");
  b->add_option("--start", bench.start, "start rows for explicit mode");
  b->add_option("--offset", bench.offset, "constant added to sampled fields");
  b->add_option("--budget", bench.budget);
  b->add_option("--out", bench.out);
  bench.model.add_to(b);

  BoundsOptions bounds;
  auto* d = app.add_subcommand("bounds", "report performance bounds");
  d->add_option("--field", bounds.field);
  d->add_option("-k,--robots", bounds.robots);
  d->add_option("-t,--horizon", bounds.horizon, "planning horizon t (C = t + 2)");
  d->add_option("--rows", bounds.rows, "rows for exhaustive verification");
  d->add_option("--budget", bounds.budget);
  d->add_option("--condition-trials", bounds.condition_trials);
  d->add_option("--seed", bounds.seed);
  d->add_option("--out", bounds.out);
  bounds.model.add_to(d);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*s) return run_synth(synth);
    if (*p) return run_plan(plan_opts);
    if (*b) return run_bench(bench);
    if (*d) return run_bounds(bounds);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
