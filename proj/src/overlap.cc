// Copyright 2026 The attrisbm Authors.
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

#include "attrisbm/overlap.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "attrisbm/error.hpp"

namespace attrisbm {
namespace {

constexpr int kMaxExhaustiveK = 8;

}  // namespace

std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd& weights) {
  // Shortest augmenting path formulation on costs = -weights, 1-based
  // potentials u (rows) and v (columns).
  const int n = static_cast<int>(weights.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[col] = row
  std::vector<int> way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int r0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -weights(r0 - 1, col - 1) - u[r0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int col = 1; col <= n; ++col) assignment[match[col] - 1] = col - 1;
  return assignment;
}

OverlapScore ComputeOverlap(std::span<const int> estimated,
                            std::span<const int> truth,
                            const Eigen::MatrixXd& prior,
                            std::span<const int> attrs) {
  const int K = static_cast<int>(prior.rows());
  const std::size_t n = truth.size();
  if (estimated.size() != n || attrs.size() != n) {
    throw Error(ErrorCode::kInvalidInput, "overlap inputs differ in length");
  }
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "overlap of empty labeling");

  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(K, K);
  std::vector<double> attr_count(prior.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (estimated[i] < 0 || estimated[i] >= K || truth[i] < 0 ||
        truth[i] >= K) {
      throw Error(ErrorCode::kInvalidInput, "label outside [1, K]");
    }
    if (attrs[i] < 0 || attrs[i] >= prior.cols()) {
      throw Error(ErrorCode::kInvalidInput, "attribute outside [1, R]");
    }
    confusion(estimated[i], truth[i]) += 1.0;
    attr_count[attrs[i]] += 1.0;
  }

  OverlapScore score;
  if (K <= kMaxExhaustiveK) {
    std::vector<int> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1.0;
    do {
      double agree = 0.0;
      for (int k = 0; k < K; ++k) agree += confusion(k, perm[k]);
      if (agree > best) {
        best = agree;
        score.best_permutation = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    score.best_permutation = MaxWeightAssignment(confusion);
  }
  double agree = 0.0;
  for (int k = 0; k < K; ++k) agree += confusion(k, score.best_permutation[k]);
  score.raw_agreement = agree / static_cast<double>(n);

  double blind = 0.0;
  for (int k = 0; k < K; ++k) {
    double mass = 0.0;
    for (Eigen::Index r = 0; r < prior.cols(); ++r) mass += attr_count[r] * prior(k, r);
    blind = std::max(blind, mass / static_cast<double>(n));
  }
  // With a single community (blind == 1) every labeling is perfect.
  score.overlap = blind >= 1.0
                      ? 1.0
                      : (score.raw_agreement - blind) / (1.0 - blind);
  return score;
}

}  // namespace attrisbm
