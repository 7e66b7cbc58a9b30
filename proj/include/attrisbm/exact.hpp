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

// Reference inference for tiny graphs: brute-force posterior marginals and
// belief propagation over all n (n - 1) ordered pairs (no field shortcut).

#ifndef ATTRISBM_EXACT_HPP_
#define ATTRISBM_EXACT_HPP_

#include <Eigen/Dense>

#include <cstdint>

#include "attrisbm/graph.hpp"
#include "attrisbm/model.hpp"

namespace attrisbm {

// Whether absent edges contribute their (1 - c/n) factor to the
// likelihood. kInclude is the full model likelihood. kExclude keeps only
// the edge factors, which makes the posterior of a tree graph a tree
// factor graph.
enum class NonEdgeFactors { kInclude, kExclude };

inline constexpr std::int64_t kDefaultEnumerationBudget = 1'000'000;

// Posterior marginals by summing over all K^n assignments, each weighted by
//   prod_i q(k_i, r_i) prod_{(i,j) in E} c_ij / n prod_{(i,j) not in E} (1 - c_ij / n).
// Throws kBudget when K^n exceeds `budget`.
Eigen::MatrixXd ExactMarginals(
    const AttributedGraph& graph, const ModelParams& params,
    NonEdgeFactors non_edges = NonEdgeFactors::kInclude,
    std::int64_t budget = kDefaultEnumerationBudget);

struct FullBPResult {
  Eigen::MatrixXd marginals;  // n x K
  int iterations = 0;
  double last_delta = 0.0;
  bool converged = false;
};

// Belief propagation with a message on every ordered pair (i, j), i != j:
//   psi_{i->j}(k) ∝ q(k, r_i) prod_{l != i, j} sum_kl w_il(k, kl) psi_{l->i}(kl)
// where w_il = c for an edge and 1 - c/n (or 1 under kExclude) otherwise.
// Sequential updates in index order. Exact on trees under kExclude.
FullBPResult FullMessageBP(const AttributedGraph& graph,
                           const ModelParams& params, NonEdgeFactors non_edges,
                           int max_iterations = 1000, double tol = 1e-15);

}  // namespace attrisbm

#endif  // ATTRISBM_EXACT_HPP_
