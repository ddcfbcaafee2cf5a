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
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "markov_ipp/errors.hpp"
#include "markov_ipp/gp.hpp"

namespace markov_ipp {

/// An r x C grid of sampling locations. Column 0 holds the start positions,
/// column C-1 the last stage.
struct TransectGrid {
  int n_rows = 1;
  int n_cols = 2;
  double omega1 = 1.0;
  double omega2 = 1.0;
  std::optional<Eigen::MatrixXd> measurements;  // n_rows x n_cols ground truth

  Widths widths() const { return {omega1, omega2}; }

  /// Number of planning stages minus one, i.e. t with C = t + 2.
  int horizon() const { return n_cols - 2; }

  std::size_t size() const {
    return static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols);
  }

  /// Wider-than-long grids are legal but atypical for a transect.
  bool is_elongated() const { return n_cols > n_rows; }

  void validate() const {
    if (n_rows < 1 || n_cols < 2) {
      throw Error(ErrorCode::kInvalidArgument, "grid needs r >= 1 and C >= 2");
    }
    if (!(omega1 > 0.0) || !(omega2 > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "grid widths must be positive");
    }
    if (measurements) {
      if (measurements->rows() != n_rows || measurements->cols() != n_cols) {
        throw Error(ErrorCode::kInvalidArgument, "measurement shape mismatch");
      }
      if (!measurements->allFinite()) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite measurement");
      }
    }
  }

  double value_at(const Location& l) const {
    if (!measurements) {
      throw Error(ErrorCode::kInvalidArgument, "grid carries no measurements");
    }
    return (*measurements)(l.row, l.col);
  }

  /// All locations, column by column.
  LocationList all_locations() const {
    LocationList out;
    out.reserve(size());
    for (int c = 0; c < n_cols; ++c) {
      for (int r = 0; r < n_rows; ++r) out.push_back({c, r});
    }
    return out;
  }
};

/// Joint placement of k robots inside one column: strictly increasing rows.
class RobotConfig {
 public:
  RobotConfig() = default;

  explicit RobotConfig(std::vector<int> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) {
      throw Error(ErrorCode::kInvalidArity, "a configuration needs at least one robot");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i] < 0 || (i > 0 && rows_[i] <= rows_[i - 1])) {
        throw Error(ErrorCode::kInvalidArgument,
                    "configuration rows must be non-negative and strictly increasing");
      }
    }
  }

  /// Canonicalizes an unordered list of rows. Duplicate rows are rejected.
  static RobotConfig from_unsorted(std::vector<int> rows) {
    std::sort(rows.begin(), rows.end());
    return RobotConfig(std::move(rows));
  }

  const std::vector<int>& rows() const { return rows_; }
  int robots() const { return static_cast<int>(rows_.size()); }

  bool fits(int n_rows) const { return !rows_.empty() && rows_.back() < n_rows; }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(rows_[i]);
    }
    return s;
  }

  friend auto operator<=>(const RobotConfig&, const RobotConfig&) = default;

 private:
  std::vector<int> rows_;
};

/// A configuration pinned to a column.
struct Placement {
  RobotConfig config;
  int col = 0;
};

/// One configuration per column, columns 0..C-1.
struct ObservationPath {
  std::vector<RobotConfig> configs;
  std::optional<std::vector<std::vector<double>>> values;

  int robots() const { return configs.empty() ? 0 : configs.front().robots(); }

  void validate(const TransectGrid& grid) const {
    if (static_cast<int>(configs.size()) != grid.n_cols) {
      throw Error(ErrorCode::kInvalidArgument, "path must cover every column");
    }
    const int k = robots();
    for (const auto& c : configs) {
      if (c.robots() != k || !c.fits(grid.n_rows)) {
        throw Error(ErrorCode::kInvalidArgument, "inconsistent path configuration");
      }
    }
    if (values) {
      if (values->size() != configs.size()) {
        throw Error(ErrorCode::kInvalidArgument, "path values length mismatch");
      }
      for (const auto& v : *values) {
        if (static_cast<int>(v.size()) != k) {
          throw Error(ErrorCode::kInvalidArgument, "path values arity mismatch");
        }
      }
    }
  }
};

/// Every sorted k-subset of {0..r-1}, in lexicographic order.
inline std::vector<RobotConfig> enumerate_configs(int r, int k) {
  if (k < 1 || k > r) {
    throw Error(ErrorCode::kInvalidArity,
                "need 1 <= k <= r (k=" + std::to_string(k) + ", r=" + std::to_string(r) + ")");
  }
  std::vector<RobotConfig> out;
  std::vector<int> rows(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.emplace_back(rows);
    int i = k - 1;
    while (i >= 0 && rows[static_cast<std::size_t>(i)] == r - k + i) --i;
    if (i < 0) break;
    ++rows[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      rows[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

/// n choose k as a double, for sizing searches without overflow.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / i;
  return std::round(b);
}

/// The action is the destination configuration in the next column; any
/// current configuration can reach any next-column configuration.
inline Placement transition(const TransectGrid& grid, const Placement& x,
                            const RobotConfig& action) {
  if (x.col + 1 > grid.n_cols - 1) {
    throw Error(ErrorCode::kColumnOverflow, "no column after " + std::to_string(x.col));
  }
  if (action.robots() != x.config.robots() || !action.fits(grid.n_rows)) {
    throw Error(ErrorCode::kInvalidArgument, "action does not fit the next column");
  }
  return {action, x.col + 1};
}

inline LocationList config_locations(const RobotConfig& x, int col) {
  LocationList out;
  out.reserve(x.rows().size());
  for (int r : x.rows()) out.push_back({col, r});
  return out;
}

/// Locations of columns [0, upto) of a path, in column order.
inline LocationList path_locations(const ObservationPath& path, int upto = -1) {
  const int n = upto < 0 ? static_cast<int>(path.configs.size()) : upto;
  LocationList out;
  for (int c = 0; c < n; ++c) {
    for (int r : path.configs[static_cast<std::size_t>(c)].rows()) out.push_back({c, r});
  }
  return out;
}

/// Per-robot row sequences. Matching sorted rows column to column minimizes
/// the total vertical displacement in one dimension.
inline std::vector<std::vector<int>> robot_tracks(const ObservationPath& path) {
  std::vector<std::vector<int>> tracks(static_cast<std::size_t>(path.robots()));
  for (const auto& c : path.configs) {
    for (std::size_t j = 0; j < tracks.size(); ++j) tracks[j].push_back(c.rows()[j]);
  }
  return tracks;
}

}  // namespace markov_ipp
