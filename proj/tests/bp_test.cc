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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "attrisbm/bp.hpp"
#include "attrisbm/error.hpp"
#include "attrisbm/exact.hpp"
#include "attrisbm/generator.hpp"
#include "attrisbm/overlap.hpp"

namespace attrisbm {
namespace {

// Erdos-Renyi style graph unrelated to any model, with canonical attributes.
AttributedGraph RandomGraph(const ModelParams& params, double p,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int i = 0; i < params.n(); ++i) {
    for (int j = i + 1; j < params.n(); ++j) {
      if (coin(rng)) edges.emplace_back(i, j);
    }
  }
  return AttributedGraph(params.n(), params.CanonicalAttributes(), edges);
}

double MaxMessageSumError(const BPState& state) {
  double worst = 0.0;
  const int K = state.K();
  for (std::size_t s = 0; s * K < state.messages.size(); ++s) {
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      EXPECT_GE(state.messages[s * K + k], 0.0);
      sum += state.messages[s * K + k];
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  for (Eigen::Index i = 0; i < state.marginals.rows(); ++i) {
    worst = std::max(worst, std::abs(state.marginals.row(i).sum() - 1.0));
  }
  return worst;
}

TEST(BPConfigTest, Validation) {
  BPConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.tol = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = {};
  c.damping = 1.0;
  EXPECT_THROW(c.Validate(), Error);
  EXPECT_EQ(ParseBPInit("truth-planted"), BPInit::kTruthPlanted);
  EXPECT_EQ(BPInitName(ParseBPInit("random")), "random");
  EXPECT_THROW(ParseBPInit("bogus"), Error);
}

TEST(InitStateTest, ZeroPerturbationCopiesPrior) {
  Eigen::MatrixXd prior(3, 2);
  prior << 0.2, 0.5, 0.3, 0.25, 0.5, 0.25;
  const ModelParams p(30, 3, 2, {10, 20}, prior, Eigen::MatrixXd::Constant(6, 6, 2.0));
  const AttributedGraph g = RandomGraph(p, 0.2, 1);
  BPConfig config;
  config.perturbation = 0.0;
  const BPState s = InitState(g, p, config);
  for (int i = 0; i < g.num_nodes(); ++i) {
    const int r = g.attrs()[i];
    for (int k = 0; k < 3; ++k) EXPECT_EQ(s.marginals(i, k), prior(k, r));
    for (int slot = s.adjacency->offset[i]; slot < s.adjacency->offset[i + 1]; ++slot) {
      for (int k = 0; k < 3; ++k) EXPECT_EQ(s.message(slot)[k], prior(k, r));
    }
  }
  EXPECT_TRUE(s.field.isApprox(ComputeField(g, p, s.marginals), 1e-15));
}

TEST(InitStateTest, SameSeedSameState) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 200});
  const AttributedGraph g = GenerateGraph(p, RngSeed{4});
  BPConfig config;
  config.perturbation = 0.01;
  config.seed = RngSeed{12};
  const BPState a = InitState(g, p, config);
  const BPState b = InitState(g, p, config);
  EXPECT_EQ(a.messages, b.messages);
  EXPECT_EQ(a.marginals, b.marginals);
  config.seed = RngSeed{13};
  EXPECT_NE(InitState(g, p, config).messages, a.messages);
}

TEST(InitStateTest, TruthPlantedIndicators) {
  const ModelParams p = ExpandSymmetric({3, 1, 10, 0, 2, 90});
  const AttributedGraph g = GenerateGraph(p, RngSeed{4});
  BPConfig config;
  config.init = BPInit::kTruthPlanted;
  const BPState s = InitState(g, p, config);
  for (int i = 0; i < g.num_nodes(); ++i) {
    const int truth = (*g.truth())[i];
    for (int slot = s.adjacency->offset[i]; slot < s.adjacency->offset[i + 1]; ++slot) {
      for (int k = 0; k < 3; ++k) EXPECT_EQ(s.message(slot)[k], k == truth ? 1.0 : 0.0);
    }
  }
  const AttributedGraph bare(g.num_nodes(), g.attrs(), g.edges());
  EXPECT_THROW(InitState(bare, p, config), Error);
}

TEST(InitStateTest, RejectsAttributeBeyondR) {
  const ModelParams p = ExpandSymmetric({2, 1, 4, 0, 1, 4});
  const AttributedGraph g(4, {0, 0, 1, 0}, {});
  try {
    InitState(g, p, BPConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

// psi = q is a fixed point whenever the prior is uniform and degrees are
// equal, for any graph whatsoever.
TEST(SweepTest, PriorIsFixedPointOnArbitraryGraphs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 15.0);
  for (int t = 0; t < 40; ++t) {
    double v[3] = {u(rng), u(rng), u(rng)};
    std::sort(v, v + 3);
    const int K = 2 + t % 3;
    const int R = 1 + t % 3;
    const ModelParams p = ExpandSymmetric({K, R, v[2], v[1], v[0], 60});
    const AttributedGraph g = RandomGraph(p, 0.05 + 0.01 * t, 100 + t);
    BPConfig config;
    config.perturbation = 0.0;
    BPState s = InitState(g, p, config);
    Sweep(s, g, p);
    EXPECT_LT(s.last_delta, 1e-10) << "t=" << t << " K=" << K << " R=" << R << " v=" << v[0] << "," << v[1] << "," << v[2];
  }
}

TEST(SweepTest, EmptyGraphGivesPriorMarginals) {
  Eigen::MatrixXd prior(2, 2);
  prior << 0.3, 0.6, 0.7, 0.4;
  const ModelParams p(10, 2, 2, {4, 6}, prior, Eigen::MatrixXd::Zero(4, 4));
  const AttributedGraph g(10, p.CanonicalAttributes(), {});
  const BPResult r = RunBP(g, p, BPConfig{});
  EXPECT_TRUE(r.converged);
  for (int i = 0; i < 10; ++i) {
    for (int k = 0; k < 2; ++k) EXPECT_EQ(r.state.marginals(i, k), prior(k, g.attrs()[i]));
  }
}

TEST(SweepTest, IsolatedNodesFollowPriorTimesField) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 40});
  const AttributedGraph g(40, p.CanonicalAttributes(), {{0, 1}, {2, 30}});
  const BPResult r = RunBP(g, p, BPConfig{});
  // Node 5 is isolated.
  const Eigen::MatrixXd field = r.state.field;
  Eigen::VectorXd want(2);
  for (int k = 0; k < 2; ++k) want(k) = p.q(k, 0) * std::exp(-field(k, 0));
  want /= want.sum();
  EXPECT_NEAR(r.state.marginals(5, 0), want(0), 1e-3);
}

// Two nodes joined by an edge: every pair factor lives on one edge, so the
// graph is a tree and exact two-node marginals are available in closed form.
TEST(SweepTest, SingleEdgeMatchesTwoNodePosterior) {
  Eigen::MatrixXd c(2, 2);
  c << 2.0, 0.1, 0.1, 2.0;
  const ModelParams p(2, 2, 1, {2}, Eigen::MatrixXd::Constant(2, 1, 0.5), c);
  const AttributedGraph g(2, {0, 0}, {{0, 1}}, std::vector<int>{0, 0});
  BPConfig config;
  config.init = BPInit::kTruthPlanted;
  config.tol = 1e-13;
  config.max_sweeps = 10000;
  const BPResult r = RunBP(g, p, config);
  ASSERT_TRUE(r.converged);
  const Eigen::MatrixXd exact = ExactMarginals(g, p, NonEdgeFactors::kExclude);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(r.state.marginals(i, k), exact(i, k), 1e-6);
  }
}

TEST(SweepTest, ZeroNormalizerNamesTheEdge) {
  // Disjoint support: a node whose cavity sees both communities has no
  // consistent state.
  Eigen::MatrixXd c(2, 2);
  c << 1.0, 0.0, 0.0, 1.0;
  const ModelParams p(4, 2, 1, {4}, Eigen::MatrixXd::Constant(2, 1, 0.5), c);
  const AttributedGraph g(4, {0, 0, 0, 0},
                          {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
                          std::vector<int>{0, 0, 1, 1});
  BPConfig config;
  config.init = BPInit::kTruthPlanted;
  try {
    RunBP(g, p, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumerical);
    EXPECT_NE(std::string(e.what()).find("edge"), std::string::npos) << e.what();
  }
}

TEST(RunBPTest, MaxSweepsZeroReturnsInitialState) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 200});
  const AttributedGraph g = GenerateGraph(p, RngSeed{1});
  BPConfig config;
  config.max_sweeps = 0;
  const BPResult r = RunBP(g, p, config);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.state.iterations, 0);
  const BPState init = InitState(g, p, config);
  EXPECT_EQ(r.state.messages, init.messages);
  EXPECT_EQ(r.state.marginals, init.marginals);
}

TEST(RunBPTest, NormalizationAndFieldConsistencyEverySweep) {
  const ModelParams p = ExpandSymmetric({3, 2, 12, 7, 1, 600});
  const AttributedGraph g = GenerateGraph(p, RngSeed{8});
  BPConfig config;
  config.damping = 0.3;
  BPState s = InitState(g, p, config);
  for (int sweep = 0; sweep < 30; ++sweep) {
    Sweep(s, g, p);
    EXPECT_LT(MaxMessageSumError(s), 1e-12);
    const Eigen::MatrixXd fresh = ComputeField(g, p, s.marginals);
    EXPECT_LT((fresh - s.field).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(RunBPTest, DeterministicAndRelocatable) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 500});
  const AttributedGraph g = GenerateGraph(p, RngSeed{2});
  BPConfig config;
  config.seed = RngSeed{99};
  config.max_sweeps = 20;
  const BPResult a = RunBP(g, p, config);
  // Same run, but the state hops to a fresh thread between sweeps.
  BPState s = InitState(g, p, config);
  for (int i = 0; i < a.state.iterations; ++i) {
    std::thread([&] { Sweep(s, g, p); }).join();
  }
  EXPECT_EQ(s.messages, a.state.messages);
  EXPECT_EQ(s.marginals, a.state.marginals);
}

TEST(RunBPTest, PlantedTruthStrongRegimeRecoversLabels) {
  const ModelParams p = ExpandSymmetric({2, 2, 40, 20, 0.2, 400});
  const AttributedGraph g = GenerateGraph(p, RngSeed{7});
  BPConfig config;
  config.init = BPInit::kTruthPlanted;
  const BPResult r = RunBP(g, p, config);
  EXPECT_TRUE(r.converged);
  const auto labels = HardAssign(r.state.marginals);
  EXPECT_EQ(ComputeOverlap(labels, *g.truth(), p.prior(), g.attrs()).overlap, 1.0);
}

TEST(RunBPTest, DetectableWorkedSpecFindsSignal) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 4000});
  const AttributedGraph g = GenerateGraph(p, RngSeed{5});
  BPConfig config;
  config.seed = RngSeed{5};
  const BPResult r = RunBP(g, p, config);
  EXPECT_TRUE(r.converged);
  const double overlap =
      ComputeOverlap(HardAssign(r.state.marginals), *g.truth(), p.prior(), g.attrs())
          .overlap;
  EXPECT_GT(overlap, 0.1);
}

TEST(RunBPTest, ZeroSignalConvergesToPrior) {
  const ModelParams p = ExpandSymmetric({2, 2, 5, 5, 5, 2000});
  const AttributedGraph g = GenerateGraph(p, RngSeed{6});
  const BPResult r = RunBP(g, p, BPConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.state.marginals.array() - 0.5).abs().maxCoeff(), 1e-4);
  const double overlap =
      ComputeOverlap(HardAssign(r.state.marginals), *g.truth(), p.prior(), g.attrs())
          .overlap;
  EXPECT_LT(std::abs(overlap), 0.1);
}

TEST(HardAssignTest, TieGoesToLowest) {
  Eigen::MatrixXd m(3, 2);
  m << 0.9, 0.1, 0.5, 0.5, 0.2, 0.8;
  EXPECT_EQ(HardAssign(m), (std::vector<int>{0, 0, 1}));
}

TEST(WriteMarginalsCsvTest, Format) {
  const AttributedGraph g(2, {0, 1}, {});
  Eigen::MatrixXd m(2, 2);
  m << 0.25, 0.75, 1.0, 0.0;
  std::ostringstream out;
  WriteMarginalsCsv(out, g, m);
  EXPECT_EQ(out.str(), "node,r,k_hat,p_1,p_2\n1,1,2,0.25,0.75\n2,2,1,1,0\n");
}

// Standard SBM belief propagation (single attribute), written directly from
// the textbook cavity equations with plain products. RNG use mirrors the
// engine: per node, K marginal draws then K draws per neighbor slot in
// ascending neighbor order; one shuffle per sweep.
class ReferenceSbmBP {
 public:
  ReferenceSbmBP(const AttributedGraph& g, const Eigen::VectorXd& prior,
                 const Eigen::MatrixXd& c, double perturbation, RngSeed seed)
      : n_(g.num_nodes()), K_(static_cast<int>(prior.size())), prior_(prior), c_(c),
        rng_(MakeEngine(seed, Stream::kBeliefPropagation)), nbr_(n_) {
    for (const auto& [u, v] : g.edges()) {
      nbr_[u].push_back(v);
      nbr_[v].push_back(u);
    }
    for (auto& l : nbr_) std::sort(l.begin(), l.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
      std::vector<double> x(K_);
      double z = 0.0;
      for (int k = 0; k < K_; ++k) z += x[k] = prior_(k) + perturbation * unit(rng_);
      for (double& v : x) v /= z;
      return x;
    };
    marg_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      marg_[i] = draw();
      for (int j : nbr_[i]) msg_[{i, j}] = draw();
    }
    h_.assign(K_, 0.0);
    for (int k = 0; k < K_; ++k) {
      for (int l = 0; l < n_; ++l) {
        for (int kl = 0; kl < K_; ++kl) h_[k] += c_(k, kl) * marg_[l][kl];
      }
      h_[k] /= n_;
    }
  }

  void Sweep() {
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    for (int i : order) {
      for (int j : nbr_[i]) {
        std::vector<double> m(K_);
        double z = 0.0;
        for (int k = 0; k < K_; ++k) {
          double v = prior_(k) * std::exp(-h_[k]);
          for (int l : nbr_[i]) {
            if (l == j) continue;
            double s = 0.0;
            for (int kl = 0; kl < K_; ++kl) s += c_(k, kl) * msg_[{l, i}][kl];
            v *= s;
          }
          z += m[k] = v;
        }
        for (double& v : m) v /= z;
        msg_[{i, j}] = m;
      }
      std::vector<double> old = marg_[i];
      double z = 0.0;
      for (int k = 0; k < K_; ++k) {
        double v = prior_(k) * std::exp(-h_[k]);
        for (int l : nbr_[i]) {
          double s = 0.0;
          for (int kl = 0; kl < K_; ++kl) s += c_(k, kl) * msg_[{l, i}][kl];
          v *= s;
        }
        z += marg_[i][k] = v;
      }
      for (double& v : marg_[i]) v /= z;
      for (int k = 0; k < K_; ++k) {
        for (int kl = 0; kl < K_; ++kl) h_[k] += c_(k, kl) * (marg_[i][kl] - old[kl]) / n_;
      }
    }
  }

  const std::vector<double>& message(int i, int j) { return msg_[{i, j}]; }
  const std::vector<double>& marginal(int i) const { return marg_[i]; }

 private:
  int n_;
  int K_;
  Eigen::VectorXd prior_;
  Eigen::MatrixXd c_;
  Engine rng_;
  std::vector<std::vector<int>> nbr_;
  std::map<std::pair<int, int>, std::vector<double>> msg_;
  std::vector<std::vector<double>> marg_;
  std::vector<double> h_;
};

TEST(RunBPTest, SingleAttributeMatchesReferenceSbmTrajectory) {
  Eigen::MatrixXd c(3, 3);
  c << 9, 1.5, 1.5, 1.5, 9, 1.5, 1.5, 1.5, 9;
  const ModelParams p(300, 3, 1, {300}, Eigen::MatrixXd::Constant(3, 1, 1.0 / 3), c);
  const AttributedGraph g = GenerateGraph(p, RngSeed{31});
  BPConfig config;
  config.seed = RngSeed{77};
  BPState engine = InitState(g, p, config);
  ReferenceSbmBP ref(g, p.prior().col(0), c, config.perturbation, config.seed);
  for (int sweep = 0; sweep < 25; ++sweep) {
    Sweep(engine, g, p);
    ref.Sweep();
    double worst = 0.0;
    const Adjacency& adj = *engine.adjacency;
    for (int i = 0; i < g.num_nodes(); ++i) {
      for (int s = adj.offset[i]; s < adj.offset[i + 1]; ++s) {
        const auto& want = ref.message(i, adj.neighbor[s]);
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(engine.message(s)[k] - want[k]));
      }
      for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, std::abs(engine.marginals(i, k) - ref.marginal(i)[k]));
      }
    }
    ASSERT_LT(worst, 1e-12) << "sweep " << sweep;
  }
}

}  // namespace
}  // namespace attrisbm
