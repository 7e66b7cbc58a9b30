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

#include "attrisbm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "attrisbm/error.hpp"

namespace attrisbm {
namespace {

void CheckSizes(const AttributedGraph& graph, const ModelParams& params) {
  if (graph.num_nodes() != params.n()) {
    throw Error(ErrorCode::kInvalidInput, "graph size differs from params.n");
  }
  for (int r : graph.attrs()) {
    if (r >= params.R()) {
      throw Error(ErrorCode::kInvalidInput, "attribute exceeds R");
    }
  }
}

std::vector<char> DenseAdjacency(const AttributedGraph& graph) {
  const int n = graph.num_nodes();
  std::vector<char> a(static_cast<std::size_t>(n) * n, 0);
  for (const auto& [u, v] : graph.edges()) {
    a[u * n + v] = 1;
    a[v * n + u] = 1;
  }
  return a;
}

}  // namespace

Eigen::MatrixXd ExactMarginals(const AttributedGraph& graph,
                               const ModelParams& params,
                               NonEdgeFactors non_edges, std::int64_t budget) {
  CheckSizes(graph, params);
  const int n = graph.num_nodes();
  const int K = params.K();
  std::int64_t states = 1;
  for (int i = 0; i < n; ++i) {
    states *= K;
    if (states > budget) {
      std::ostringstream os;
      os << "K^n exceeds the enumeration budget of " << budget;
      throw Error(ErrorCode::kBudget, os.str());
    }
  }
  const std::vector<char> adjacent = DenseAdjacency(graph);
  const auto& attrs = graph.attrs();
  const double nn = params.n();

  Eigen::MatrixXd marginals = Eigen::MatrixXd::Zero(n, K);
  double total = 0.0;
  std::vector<int> k(n, 0);
  for (std::int64_t s = 0; s < states; ++s) {
    double w = 1.0;
    for (int i = 0; i < n && w > 0.0; ++i) w *= params.q(k[i], attrs[i]);
    for (int i = 0; i < n && w > 0.0; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double p = params.c(k[i], attrs[i], k[j], attrs[j]) / nn;
        if (adjacent[i * n + j]) {
          w *= p;
        } else if (non_edges == NonEdgeFactors::kInclude) {
          w *= 1.0 - p;
        }
      }
    }
    total += w;
    for (int i = 0; i < n; ++i) marginals(i, k[i]) += w;
    // Next assignment, little-endian counter over base K.
    for (int i = 0; i < n; ++i) {
      if (++k[i] < K) break;
      k[i] = 0;
    }
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "graph has zero likelihood");
  }
  if (n == 0) return marginals;
  return marginals / total;
}

FullBPResult FullMessageBP(const AttributedGraph& graph,
                           const ModelParams& params, NonEdgeFactors non_edges,
                           int max_iterations, double tol) {
  CheckSizes(graph, params);
  const int n = graph.num_nodes();
  const int K = params.K();
  const auto& attrs = graph.attrs();
  const std::vector<char> adjacent = DenseAdjacency(graph);
  const double nn = params.n();

  auto weight = [&](int i, int ki, int l, int kl) {
    const double c = params.c(ki, attrs[i], kl, attrs[l]);
    if (adjacent[i * n + l]) return c;
    return non_edges == NonEdgeFactors::kInclude ? 1.0 - c / nn : 1.0;
  };
  // msg[(i * n + j) * K + k] = psi_{i->j}(k); start from the prior.
  std::vector<double> msg(static_cast<std::size_t>(n) * n * K, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < K; ++k) msg[(i * n + j) * K + k] = params.q(k, attrs[i]);
    }
  }
  // Product over incoming messages to i, skipping `skip` (-1 for none).
  auto cavity = [&](int i, int skip, std::vector<double>& out) {
    for (int k = 0; k < K; ++k) out[k] = params.q(k, attrs[i]);
    for (int l = 0; l < n; ++l) {
      if (l == i || l == skip) continue;
      for (int k = 0; k < K; ++k) {
        double sum = 0.0;
        for (int kl = 0; kl < K; ++kl) {
          sum += weight(i, k, l, kl) * msg[(l * n + i) * K + kl];
        }
        out[k] *= sum;
      }
    }
    double z = 0.0;
    for (int k = 0; k < K; ++k) z += out[k];
    if (!(z > 0.0) || !std::isfinite(z)) {
      throw Error(ErrorCode::kNumerical, "full BP normalizer underflow");
    }
    for (int k = 0; k < K; ++k) out[k] /= z;
  };

  FullBPResult result;
  std::vector<double> fresh(K);
  for (int it = 0; it < max_iterations; ++it) {
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        cavity(i, j, fresh);
        for (int k = 0; k < K; ++k) {
          double& m = msg[(i * n + j) * K + k];
          delta = std::max(delta, std::abs(fresh[k] - m));
          m = fresh[k];
        }
      }
    }
    result.iterations = it + 1;
    result.last_delta = delta;
    if (delta < tol) {
      result.converged = true;
      break;
    }
  }
  result.marginals.resize(n, K);
  for (int i = 0; i < n; ++i) {
    cavity(i, -1, fresh);
    for (int k = 0; k < K; ++k) result.marginals(i, k) = fresh[k];
  }
  return result;
}

}  // namespace attrisbm
