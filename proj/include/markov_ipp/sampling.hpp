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
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cstdint>

#include "markov_ipp/errors.hpp"
#include "markov_ipp/gp.hpp"
#include "markov_ipp/transect.hpp"

namespace markov_ipp {

/// Largest grid whose full prior covariance we are willing to factor.
inline constexpr std::size_t kMaxDenseLocations = 5000;

inline void check_dense_size(std::size_t n) {
  if (n > kMaxDenseLocations) {
    throw Error(ErrorCode::kGridTooLarge,
                std::to_string(n) + " locations exceed the dense limit");
  }
}

/// One exact draw of the measurement field, returned as an n_rows x n_cols
/// matrix. Boost's generators are used because their output is specified
/// independently of the standard library implementation.
inline Eigen::MatrixXd sample_prior_field(const TransectGrid& grid, const Hyperparams& h,
                                          double prior_mean, std::uint64_t seed) {
  grid.validate();
  h.validate();
  check_dense_size(grid.size());
  const LocationList locs = grid.all_locations();
  const Cholesky chol = robust_cholesky(cov_matrix(locs, h, grid.widths()));

  boost::random::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd eps(static_cast<Eigen::Index>(locs.size()));
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = normal(rng);
  const Eigen::VectorXd z = chol.lower.triangularView<Eigen::Lower>() * eps;

  Eigen::MatrixXd field(grid.n_rows, grid.n_cols);
  for (std::size_t i = 0; i < locs.size(); ++i) {
    field(locs[i].row, locs[i].col) = prior_mean + z(static_cast<Eigen::Index>(i));
  }
  return field;
}

}  // namespace markov_ipp
