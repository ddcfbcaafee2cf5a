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


// Gaussian process machinery for fields on a transect grid: the squared
// exponential covariance, posterior conditioning, Gaussian entropy and
// conditional mutual information.
//
// All matrices are dense Eigen matrices. Every factorization goes through
// robust_cholesky(), which escalates a diagonal jitter through a fixed ladder
// so that results are reproducible across runs.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <compare>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "markov_ipp/errors.hpp"

namespace markov_ipp {

using CovMatrix = Eigen::MatrixXd;

struct Hyperparams {
  double ell1 = 1.0;        // horizontal length-scale, meters
  double ell2 = 1.0;        // vertical length-scale, meters
  double signal_var = 1.0;  // sigma_s^2
  double noise_var = 0.0;   // sigma_n^2

  void validate() const {
    if (!(ell1 > 0.0) || !(ell2 > 0.0) || !std::isfinite(ell1) ||
        !std::isfinite(ell2)) {
      throw Error(ErrorCode::kInvalidArgument, "length-scales must be positive");
    }
    if (!(signal_var > 0.0) || !std::isfinite(signal_var)) {
      throw Error(ErrorCode::kInvalidArgument, "signal variance must be positive");
    }
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
      throw Error(ErrorCode::kInvalidArgument, "noise variance must be >= 0");
    }
  }
};

/// Horizontal (between columns) and vertical (between rows) grid spacing in
/// meters.
struct Widths {
  double omega1 = 1.0;
  double omega2 = 1.0;
};

/// A grid cell. Physical position is (col * omega1, row * omega2).
struct Location {
  int col = 0;
  int row = 0;

  friend auto operator<=>(const Location&, const Location&) = default;
};

using LocationList = std::vector<Location>;

/// Squared exponential covariance with an additive white-noise term on
/// coincident locations. Distances are measured in meters.
inline double covariance(const Location& u, const Location& v,
                         const Hyperparams& h, const Widths& w) {
  const double dx = static_cast<double>(u.col - v.col) * w.omega1 / h.ell1;
  const double dy = static_cast<double>(u.row - v.row) * w.omega2 / h.ell2;
  double value = h.signal_var * std::exp(-0.5 * (dx * dx + dy * dy));
  if (u == v) value += h.noise_var;
  return value;
}

/// Covariance matrix of one list of measurements. The noise term sits on the
/// diagonal only, so a location listed twice is treated as two independent
/// noisy readings of the same cell.
inline CovMatrix cov_matrix(std::span<const Location> locs, const Hyperparams& h,
                            const Widths& w) {
  const auto n = static_cast<Eigen::Index>(locs.size());
  CovMatrix k(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    k(a, a) = h.signal_var + h.noise_var;
    for (Eigen::Index b = 0; b < a; ++b) {
      const double dx = static_cast<double>(locs[a].col - locs[b].col) * w.omega1 / h.ell1;
      const double dy = static_cast<double>(locs[a].row - locs[b].row) * w.omega2 / h.ell2;
      const double v = h.signal_var * std::exp(-0.5 * (dx * dx + dy * dy));
      k(a, b) = v;
      k(b, a) = v;
    }
  }
  return k;
}

/// Cross-covariance between two location lists (rows: `a`, cols: `b`).
inline Eigen::MatrixXd cross_cov(std::span<const Location> a,
                                 std::span<const Location> b,
                                 const Hyperparams& h, const Widths& w) {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(a.size()),
                    static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          covariance(a[i], b[j], h, w);
    }
  }
  return k;
}

// ---------------------------------------------------------------------------
// Factorization

/// Jitter ladder, relative to the mean diagonal entry.
inline constexpr double kJitterLadder[] = {0.0, 1e-12, 1e-10, 1e-8};

/// Pivots of the triangular factor below this value mark the covariance as
/// singular for entropy purposes.
inline constexpr double kLogDetFloor = 1e-150;

struct Cholesky {
  Eigen::MatrixXd lower;  // L with L L^T = A + jitter * I
  double jitter = 0.0;    // absolute jitter that was added

  Eigen::Index size() const { return lower.rows(); }

  /// Solves L y = b in place.
  template <typename Derived>
  void solve_lower_in_place(Eigen::MatrixBase<Derived>& b) const {
    lower.triangularView<Eigen::Lower>().solveInPlace(b);
  }

  /// Solves (L L^T) x = b.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const {
    Eigen::MatrixXd x = b;
    lower.triangularView<Eigen::Lower>().solveInPlace(x);
    lower.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
  }

  /// log |A| from the factor. Throws SingularCovariance on vanishing pivots.
  double log_det() const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < lower.rows(); ++i) {
      const double d = lower(i, i);
      if (!(d > kLogDetFloor)) {
        throw Error(ErrorCode::kSingularCovariance,
                    "triangular factor pivot below floor");
      }
      sum += std::log(d);
    }
    return 2.0 * sum;
  }
};

inline Cholesky robust_cholesky(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "covariance matrix must be square");
  }
  if (n == 0) return {Eigen::MatrixXd(0, 0), 0.0};
  if (!a.allFinite()) {
    throw Error(ErrorCode::kFactorizationFailure, "non-finite covariance entry");
  }
  const double scale = std::max(a.diagonal().mean(), 0.0);
  for (double rel : kJitterLadder) {
    const double jitter = rel * scale;
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      if (l.allFinite() && (l.diagonal().array() > 0.0).all()) {
        return {std::move(l), jitter};
      }
    }
  }
  throw Error(ErrorCode::kFactorizationFailure,
              "covariance not positive definite after jitter escalation (n=" +
                  std::to_string(n) + ")");
}

// ---------------------------------------------------------------------------
// Entropy

inline constexpr double kLog2PiE = 2.8378770664093454836;  // log(2*pi*e)

/// Differential entropy (nats) of N(., sigma) from a triangular factor.
inline double gaussian_entropy(const Cholesky& chol) {
  const auto k = static_cast<double>(chol.size());
  return 0.5 * (k * kLog2PiE + chol.log_det());
}

inline double gaussian_entropy(const CovMatrix& sigma) {
  return gaussian_entropy(robust_cholesky(sigma));
}

// ---------------------------------------------------------------------------
// Conditioning

namespace detail {

inline bool has_duplicates(std::span<const Location> locs) {
  std::vector<Location> sorted(locs.begin(), locs.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

inline void check_observations(std::span<const Location> obs,
                               const Hyperparams& h) {
  if (h.noise_var == 0.0 && has_duplicates(obs)) {
    throw Error(ErrorCode::kInvalidArgument,
                "duplicate observed locations require positive noise variance");
  }
}

}  // namespace detail

/// Set union of measurement sets, keeping the first occurrence order.
inline LocationList unite(std::span<const Location> a, std::span<const Location> b) {
  LocationList out;
  out.reserve(a.size() + b.size());
  auto push = [&out](const Location& l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  for (const auto& l : a) push(l);
  for (const auto& l : b) push(l);
  return out;
}

/// Posterior covariance of `targets` given measurements at `obs`. Measurement
/// values never enter, so the result is the same for every realization.
inline CovMatrix posterior_cov(std::span<const Location> targets,
                               std::span<const Location> obs,
                               const Hyperparams& h, const Widths& w) {
  CovMatrix prior = cov_matrix(targets, h, w);
  if (obs.empty()) return prior;
  detail::check_observations(obs, h);
  const Cholesky chol = robust_cholesky(cov_matrix(obs, h, w));
  Eigen::MatrixXd v = cross_cov(obs, targets, h, w);
  chol.solve_lower_in_place(v);
  CovMatrix post = prior - v.transpose() * v;
  return 0.5 * (post + post.transpose());
}

/// Posterior means at every target location under a constant prior mean.
inline Eigen::VectorXd posterior_means(std::span<const Location> targets,
                                       std::span<const Location> obs,
                                       std::span<const double> obs_vals,
                                       double prior_mean, const Hyperparams& h,
                                       const Widths& w) {
  if (obs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "posterior mean needs observations");
  }
  if (obs.size() != obs_vals.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "observation locations and values differ in length");
  }
  detail::check_observations(obs, h);
  const Cholesky chol = robust_cholesky(cov_matrix(obs, h, w));
  Eigen::VectorXd residual(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    residual(static_cast<Eigen::Index>(i)) = obs_vals[i] - prior_mean;
  }
  const Eigen::VectorXd alpha = chol.solve(residual);
  const Eigen::MatrixXd k_tx = cross_cov(targets, obs, h, w);
  return (k_tx * alpha).array() + prior_mean;
}

inline double posterior_mean(const Location& u, std::span<const Location> obs,
                             std::span<const double> obs_vals, double prior_mean,
                             const Hyperparams& h, const Widths& w) {
  const Location target[] = {u};
  return posterior_means(target, obs, obs_vals, prior_mean, h, w)(0);
}

/// H[Z_targets | Z_given] in nats.
inline double conditional_entropy(std::span<const Location> targets,
                                  std::span<const Location> given,
                                  const Hyperparams& h, const Widths& w) {
  return gaussian_entropy(posterior_cov(targets, given, h, w));
}

/// I[Z_next ; Z_past | Z_current]. Conditioning sets are treated as sets of
/// random variables, so measurements shared by `past` and `current` count once.
inline double cond_mutual_info(std::span<const Location> next,
                               std::span<const Location> past,
                               std::span<const Location> current,
                               const Hyperparams& h, const Widths& w) {
  if (next.empty() || current.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "next and current measurement sets must be non-empty");
  }
  const LocationList cur = unite(current, {});
  const LocationList all = unite(current, past);
  if (all.size() == cur.size()) return 0.0;
  const double mi = conditional_entropy(next, cur, h, w) -
                    conditional_entropy(next, all, h, w);
  return (mi < 0.0 && mi >= -1e-9) ? 0.0 : mi;
}

}  // namespace markov_ipp
