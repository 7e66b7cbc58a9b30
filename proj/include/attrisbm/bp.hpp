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

// Belief propagation for community marginals with known model parameters.
//
// Messages live on directed edges only. Every non-edge interaction is
// folded into an external field
//
//   h(k, r) = (1/n) sum_l sum_kl c((k,r),(kl,r_l)) psi_l(kl),
//
// and the message from i to j is
//
//   psi_{i->j}(k) ∝ q(k, r_i) exp(-h(k, r_i))
//                   prod_{l in N(i) \ j} sum_kl c((k,r_i),(kl,r_l)) psi_{l->i}(kl).
//
// psi = q is a fixed point when every community has the same degree profile
// (see CheckEqualDegree) and the prior is uniform; runs start from a
// perturbation of it. Updates are asynchronous: each sweep visits the nodes
// in a fresh random order and rewrites all outgoing messages of a node at
// once, then its marginal, then the field.

#ifndef ATTRISBM_BP_HPP_
#define ATTRISBM_BP_HPP_

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "attrisbm/graph.hpp"
#include "attrisbm/model.hpp"
#include "attrisbm/rng.hpp"

namespace attrisbm {

enum class BPInit {
  kUniformPerturbed,  // prior column + perturbation * U[0,1), renormalized
  kRandom,            // U[0,1) per component, renormalized
  kTruthPlanted,      // indicator of the planted community
};

BPInit ParseBPInit(const std::string& name);
std::string BPInitName(BPInit init);

struct BPConfig {
  int max_sweeps = 500;
  double tol = 1e-6;
  double damping = 0.0;
  BPInit init = BPInit::kUniformPerturbed;
  double perturbation = 0.1;
  RngSeed seed{};

  // Throws kInvalidInput unless tol > 0, 0 <= damping < 1,
  // max_sweeps >= 0 and perturbation >= 0.
  void Validate() const;
};

// Everything a run needs between sweeps. A value type: it can be copied or
// moved to another thread between sweeps.
struct BPState {
  std::shared_ptr<const Adjacency> adjacency;
  // messages[s * K + k] is the message along directed slot s of adjacency.
  std::vector<double> messages;
  Eigen::MatrixXd marginals;  // n x K
  Eigen::MatrixXd field;      // K x R
  double last_delta = 0.0;
  int iterations = 0;
  double damping = 0.0;
  Engine rng;

  int K() const { return static_cast<int>(marginals.cols()); }
  const double* message(int slot) const { return &messages[slot * K()]; }
};

BPState InitState(const AttributedGraph& graph, const ModelParams& params,
                  const BPConfig& config);

// One asynchronous pass over all nodes. Throws kNumerical, naming the
// edge, if a message normalizer underflows to zero.
void Sweep(BPState& state, const AttributedGraph& graph,
           const ModelParams& params);

struct BPResult {
  BPState state;
  bool converged = false;
};

// Sweeps until last_delta < tol or max_sweeps is reached.
BPResult RunBP(const AttributedGraph& graph, const ModelParams& params,
               const BPConfig& config);

// Field recomputed from the current marginals.
Eigen::MatrixXd ComputeField(const AttributedGraph& graph,
                             const ModelParams& params,
                             const Eigen::MatrixXd& marginals);

// Argmax of each row; ties go to the lowest community index.
std::vector<int> HardAssign(const Eigen::MatrixXd& marginals);

// CSV with header node,r,k_hat,p_1..p_K; indices 1-based.
void WriteMarginalsCsv(std::ostream& out, const AttributedGraph& graph,
                       const Eigen::MatrixXd& marginals);

}  // namespace attrisbm

#endif  // ATTRISBM_BP_HPP_
