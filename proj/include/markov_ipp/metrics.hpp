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


#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "markov_ipp/errors.hpp"
#include "markov_ipp/gp.hpp"
#include "markov_ipp/planners.hpp"
#include "markov_ipp/transect.hpp"

namespace markov_ipp {

struct EvalRecord {
  PolicyKind kind = PolicyKind::kMarkov;
  RobotConfig start;
  std::string instance;  // identifies the field the record was computed on
  double ent = 0.0;      // nats; smaller is better
  double err = 0.0;      // mean squared relative error; smaller is better
  double plan_wall_time = 0.0;
};

struct MetricDiff {
  double entd = 0.0;
  double errd = 0.0;
};

/// Sampled locations of a path with repeats removed.
inline LocationList sampled_locations(const ObservationPath& path) {
  return unite(path_locations(path), {});
}

/// Grid locations the path never visits.
inline LocationList unobserved_locations(const ObservationPath& path,
                                         const TransectGrid& grid) {
  const LocationList sampled = sampled_locations(path);
  LocationList out;
  for (const auto& l : grid.all_locations()) {
    if (std::find(sampled.begin(), sampled.end(), l) == sampled.end()) out.push_back(l);
  }
  return out;
}

/// Posterior joint entropy of the unobserved field given the sampled path.
inline double ent_metric(const ObservationPath& path, const TransectGrid& grid,
                         const Hyperparams& h) {
  path.validate(grid);
  const LocationList rest = unobserved_locations(path, grid);
  if (rest.empty()) {
    throw Error(ErrorCode::kEmptyUnobservedSet, "path samples every grid location");
  }
  return conditional_entropy(rest, sampled_locations(path), h, grid.widths());
}

/// Mean squared prediction error over the whole grid, normalized by the field
/// mean. Observations are the path's recorded values when present, otherwise
/// the ground truth at the sampled cells.
inline double err_metric(const ObservationPath& path, const TransectGrid& grid,
                         const Hyperparams& h, double prior_mean) {
  path.validate(grid);
  if (!grid.measurements) {
    throw Error(ErrorCode::kInvalidArgument, "ERR needs ground-truth measurements");
  }
  const Eigen::MatrixXd& z = *grid.measurements;
  const double field_mean = z.mean();
  if (!(std::abs(field_mean) > 1e-12 * std::max(1.0, z.cwiseAbs().maxCoeff()))) {
    throw Error(ErrorCode::kZeroMeanField, "field mean is zero; ERR is undefined");
  }

  LocationList obs;
  std::vector<double> vals;
  for (std::size_t c = 0; c < path.configs.size(); ++c) {
    const auto& rows = path.configs[c].rows();
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const Location l{static_cast<int>(c), rows[j]};
      if (std::find(obs.begin(), obs.end(), l) != obs.end()) continue;
      obs.push_back(l);
      vals.push_back(path.values ? (*path.values)[c][j] : grid.value_at(l));
    }
  }
  const LocationList all = grid.all_locations();
  const Eigen::VectorXd mu = posterior_means(all, obs, vals, prior_mean, h, grid.widths());
  double sum = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double r = (grid.value_at(all[i]) - mu(static_cast<Eigen::Index>(i))) / field_mean;
    sum += r * r;
  }
  return sum / static_cast<double>(all.size());
}

/// (ENT(a) - ENT(b), ERR(a) - ERR(b)); pass the Markov record as `a`.
inline MetricDiff diff_metrics(const EvalRecord& a, const EvalRecord& b) {
  if (a.start != b.start || a.instance != b.instance) {
    throw Error(ErrorCode::kMismatchedInstances, "records come from different instances");
  }
  return {a.ent - b.ent, a.err - b.err};
}

}  // namespace markov_ipp
