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

#include "attrisbm/bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "attrisbm/error.hpp"

namespace attrisbm {
namespace {

void CheckCompatible(const AttributedGraph& graph, const ModelParams& params) {
  if (graph.num_nodes() != params.n()) {
    std::ostringstream os;
    os << "graph has " << graph.num_nodes() << " nodes but params.n = "
       << params.n();
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
  for (int i = 0; i < graph.num_nodes(); ++i) {
    if (graph.attrs()[i] >= params.R()) {
      std::ostringstream os;
      os << "node " << i + 1 << " has attribute " << graph.attrs()[i] + 1
         << " but R = " << params.R();
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
  }
}

// Writes an initial simplex for a node of attribute r into out[0..K).
void DrawInitial(const BPConfig& config, const ModelParams& params, int r,
                 int truth, Engine& rng, double* out) {
  const int K = params.K();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (config.init) {
    case BPInit::kTruthPlanted:
      for (int k = 0; k < K; ++k) out[k] = (k == truth) ? 1.0 : 0.0;
      return;
    case BPInit::kRandom: {
      double sum = 0.0;
      for (int k = 0; k < K; ++k) sum += out[k] = unit(rng);
      for (int k = 0; k < K; ++k) out[k] /= sum;
      return;
    }
    case BPInit::kUniformPerturbed: {
      if (config.perturbation == 0.0) {
        for (int k = 0; k < K; ++k) out[k] = params.q(k, r);
        return;
      }
      double sum = 0.0;
      for (int k = 0; k < K; ++k) {
        sum += out[k] = params.q(k, r) + config.perturbation * unit(rng);
      }
      for (int k = 0; k < K; ++k) out[k] /= sum;
      return;
    }
  }
}

// Sums terms[0..count) in ascending order. Equal multisets give bitwise equal
// sums, so states that are symmetric under relabeling communities stay
// symmetric in floating point instead of drifting apart by rounding.
double OrderFreeSum(double* terms, int count) {
  std::sort(terms, terms + count);
  double sum = 0.0;
  for (int t = 0; t < count; ++t) sum += terms[t];
  return sum;
}

}  // namespace

BPInit ParseBPInit(const std::string& name) {
  if (name == "uniform-perturbed") return BPInit::kUniformPerturbed;
  if (name == "random") return BPInit::kRandom;
  if (name == "truth-planted") return BPInit::kTruthPlanted;
  throw Error(ErrorCode::kInvalidInput, "unknown BP init '" + name + "'");
}

std::string BPInitName(BPInit init) {
  switch (init) {
    case BPInit::kUniformPerturbed:
      return "uniform-perturbed";
    case BPInit::kRandom:
      return "random";
    case BPInit::kTruthPlanted:
      return "truth-planted";
  }
  return "unknown";
}

void BPConfig::Validate() const {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidInput, "BP tol must be > 0");
  if (!(damping >= 0.0 && damping < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "BP damping must lie in [0, 1)");
  }
  if (max_sweeps < 0) {
    throw Error(ErrorCode::kInvalidInput, "max_sweeps must be >= 0");
  }
  if (!(perturbation >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "perturbation must be >= 0");
  }
}

Eigen::MatrixXd ComputeField(const AttributedGraph& graph,
                             const ModelParams& params,
                             const Eigen::MatrixXd& marginals) {
  const int K = params.K();
  const int R = params.R();
  // Sum marginals per attribute first: h only depends on those totals.
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(K, R);
  for (int l = 0; l < graph.num_nodes(); ++l) {
    for (int k = 0; k < K; ++k) mass(k, graph.attrs()[l]) += marginals(l, k);
  }
  Eigen::MatrixXd field = Eigen::MatrixXd::Zero(K, R);
  std::vector<double> terms(static_cast<std::size_t>(K) * R);
  for (int k = 0; k < K; ++k) {
    for (int r = 0; r < R; ++r) {
      for (int kl = 0; kl < K; ++kl) {
        for (int rl = 0; rl < R; ++rl) {
          terms[kl * R + rl] = params.c(k, r, kl, rl) * mass(kl, rl);
        }
      }
      field(k, r) = OrderFreeSum(terms.data(), K * R) / params.n();
    }
  }
  return field;
}

BPState InitState(const AttributedGraph& graph, const ModelParams& params,
                  const BPConfig& config) {
  config.Validate();
  CheckCompatible(graph, params);
  const int n = graph.num_nodes();
  const int K = params.K();
  if (config.init == BPInit::kTruthPlanted) {
    if (!graph.truth()) {
      throw Error(ErrorCode::kInvalidInput,
                  "truth-planted init needs a graph with ground truth");
    }
    for (int k : *graph.truth()) {
      if (k >= K) {
        throw Error(ErrorCode::kInvalidInput, "truth label exceeds K");
      }
    }
  }

  BPState state;
  state.adjacency = std::make_shared<const Adjacency>(graph);
  state.rng = MakeEngine(config.seed, Stream::kBeliefPropagation);
  state.damping = config.damping;
  state.messages.assign(static_cast<std::size_t>(state.adjacency->num_directed()) * K, 0.0);
  state.marginals.resize(n, K);

  std::vector<double> simplex(K);
  for (int i = 0; i < n; ++i) {
    const int r = graph.attrs()[i];
    const int truth = graph.truth() ? (*graph.truth())[i] : -1;
    DrawInitial(config, params, r, truth, state.rng, simplex.data());
    for (int k = 0; k < K; ++k) state.marginals(i, k) = simplex[k];
    const Adjacency& adj = *state.adjacency;
    for (int s = adj.offset[i]; s < adj.offset[i + 1]; ++s) {
      DrawInitial(config, params, r, truth, state.rng, &state.messages[s * K]);
    }
  }
  state.field = ComputeField(graph, params, state.marginals);
  return state;
}

void Sweep(BPState& state, const AttributedGraph& graph,
           const ModelParams& params) {
  const Adjacency& adj = *state.adjacency;
  const int n = graph.num_nodes();
  const int K = params.K();
  const int R = params.R();
  const double inv_n = 1.0 / params.n();
  const auto& attrs = graph.attrs();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), state.rng);

  int max_degree = 0;
  for (int i = 0; i < n; ++i) max_degree = std::max(max_degree, adj.degree(i));
  // incoming[t * K + k]: sum_kl c((k,r_i),(kl,r_l)) psi_{l->i}(kl), scaled
  // to max 1 over k, for the t-th neighbor l. prefix/suffix hold running
  // products so every cavity product costs O(K).
  std::vector<double> incoming(static_cast<std::size_t>(max_degree) * K);
  std::vector<double> prefix(static_cast<std::size_t>(max_degree + 1) * K);
  std::vector<double> suffix(static_cast<std::size_t>(max_degree + 1) * K);
  std::vector<double> base(K);
  std::vector<double> update(K);
  std::vector<double> old_marginal(K);
  std::vector<double> terms(K);

  double max_delta = 0.0;
  for (int i : order) {
    const int r = attrs[i];
    const int begin = adj.offset[i];
    const int degree = adj.degree(i);
    for (int k = 0; k < K; ++k) {
      base[k] = params.q(k, r) * std::exp(-state.field(k, r));
    }

    for (int t = 0; t < degree; ++t) {
      const int s = begin + t;
      const int l = adj.neighbor[s];
      const int rl = attrs[l];
      const double* from_l = state.message(adj.reverse[s]);
      double scale = 0.0;
      for (int k = 0; k < K; ++k) {
        for (int kl = 0; kl < K; ++kl) terms[kl] = params.c(k, r, kl, rl) * from_l[kl];
        const double sum = OrderFreeSum(terms.data(), K);
        incoming[t * K + k] = sum;
        scale = std::max(scale, sum);
      }
      if (scale > 0.0) {
        for (int k = 0; k < K; ++k) incoming[t * K + k] /= scale;
      }
    }
    for (int k = 0; k < K; ++k) {
      prefix[k] = 1.0;
      suffix[degree * K + k] = 1.0;
    }
    for (int t = 0; t < degree; ++t) {
      for (int k = 0; k < K; ++k) {
        prefix[(t + 1) * K + k] = prefix[t * K + k] * incoming[t * K + k];
      }
    }
    for (int t = degree; t-- > 0;) {
      for (int k = 0; k < K; ++k) {
        suffix[t * K + k] = suffix[(t + 1) * K + k] * incoming[t * K + k];
      }
    }

    for (int t = 0; t < degree; ++t) {
      const int s = begin + t;
      double z = 0.0;
      for (int k = 0; k < K; ++k) {
        update[k] = base[k] * prefix[t * K + k] * suffix[(t + 1) * K + k];
        z += update[k];
      }
      if (!(z > 0.0) || !std::isfinite(z)) {
        std::ostringstream os;
        os << "message normalizer underflow on edge " << i + 1 << " -> "
           << adj.neighbor[s] + 1;
        throw Error(ErrorCode::kNumerical, os.str());
      }
      double* msg = &state.messages[s * K];
      for (int k = 0; k < K; ++k) {
        const double fresh =
            (1.0 - state.damping) * (update[k] / z) + state.damping * msg[k];
        max_delta = std::max(max_delta, std::abs(fresh - msg[k]));
        msg[k] = fresh;
      }
    }

    double z = 0.0;
    for (int k = 0; k < K; ++k) {
      update[k] = base[k] * prefix[degree * K + k];
      z += update[k];
    }
    if (!(z > 0.0) || !std::isfinite(z)) {
      std::ostringstream os;
      os << "marginal normalizer underflow at node " << i + 1;
      throw Error(ErrorCode::kNumerical, os.str());
    }
    for (int k = 0; k < K; ++k) {
      old_marginal[k] = state.marginals(i, k);
      state.marginals(i, k) = update[k] / z;
    }
    for (int k = 0; k < K; ++k) {
      for (int rr = 0; rr < R; ++rr) {
        for (int kl = 0; kl < K; ++kl) {
          terms[kl] = params.c(k, rr, kl, r) *
                      (state.marginals(i, kl) - old_marginal[kl]);
        }
        state.field(k, rr) += OrderFreeSum(terms.data(), K) * inv_n;
      }
    }
  }
  state.last_delta = max_delta;
  ++state.iterations;
}

BPResult RunBP(const AttributedGraph& graph, const ModelParams& params,
               const BPConfig& config) {
  BPResult result{InitState(graph, params, config), false};
  for (int it = 0; it < config.max_sweeps; ++it) {
    Sweep(result.state, graph, params);
    if (result.state.last_delta < config.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::vector<int> HardAssign(const Eigen::MatrixXd& marginals) {
  std::vector<int> labels(marginals.rows());
  for (Eigen::Index i = 0; i < marginals.rows(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < marginals.cols(); ++k) {
      if (marginals(i, k) > marginals(i, best)) best = static_cast<int>(k);
    }
    labels[i] = best;
  }
  return labels;
}

void WriteMarginalsCsv(std::ostream& out, const AttributedGraph& graph,
                       const Eigen::MatrixXd& marginals) {
  const auto labels = HardAssign(marginals);
  out << "node,r,k_hat";
  for (Eigen::Index k = 0; k < marginals.cols(); ++k) out << ",p_" << k + 1;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (int i = 0; i < graph.num_nodes(); ++i) {
    out << i + 1 << ',' << graph.attrs()[i] + 1 << ',' << labels[i] + 1;
    for (Eigen::Index k = 0; k < marginals.cols(); ++k) {
      out << ',' << marginals(i, k);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace attrisbm
