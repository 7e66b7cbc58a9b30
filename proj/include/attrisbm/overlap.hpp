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

#ifndef ATTRISBM_OVERLAP_HPP_
#define ATTRISBM_OVERLAP_HPP_

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace attrisbm {

struct OverlapScore {
  // (raw_agreement - blind) / (1 - blind), where blind is the best rate
  // achievable by guessing from the prior alone: max_k sum_r n_r q(k,r) / n.
  double overlap = 0.0;
  // best_permutation[estimated label] = matched true label.
  std::vector<int> best_permutation;
  double raw_agreement = 0.0;
};

// Labels are 0-based in [0, K) with K = prior.rows(). The matching
// maximizes agreement over all relabelings: exhaustive for K <= 8, an
// optimal assignment (Hungarian) solve above that.
OverlapScore ComputeOverlap(std::span<const int> estimated,
                            std::span<const int> truth,
                            const Eigen::MatrixXd& prior,
                            std::span<const int> attrs);

// Maximum-weight perfect matching on a square matrix: returns assignment
// with assignment[row] = column. O(K^3).
std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd& weights);

}  // namespace attrisbm

#endif  // ATTRISBM_OVERLAP_HPP_
