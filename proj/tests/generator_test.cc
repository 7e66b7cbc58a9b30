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

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "attrisbm/error.hpp"
#include "attrisbm/generator.hpp"

namespace attrisbm {
namespace {

TEST(SampleCommunitiesTest, DeterministicPriorColumn) {
  Eigen::MatrixXd prior(2, 2);
  prior << 1.0, 0.5, 0.0, 0.5;
  const ModelParams p(100, 2, 2, {50, 50}, prior,
                      Eigen::MatrixXd::Constant(4, 4, 1.0));
  const std::vector<int> labels = SampleCommunities(p, RngSeed{5});
  for (int i = 0; i < 50; ++i) EXPECT_EQ(labels[i], 0);
}

TEST(SampleCommunitiesTest, BinomialConcentration) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 4000});
  const double bound = 3 * std::sqrt(4000 / 4.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::vector<int> labels = SampleCommunities(p, RngSeed{s});
    int ones = 0;
    for (int k : labels) ones += k == 0;
    EXPECT_LE(std::abs(ones - 2000), bound) << "seed " << s;
  }
}

TEST(SampleCommunitiesTest, SameSeedSameLabels) {
  const ModelParams p = ExpandSymmetric({3, 2, 10, 6, 2, 600});
  EXPECT_EQ(SampleCommunities(p, RngSeed{77}), SampleCommunities(p, RngSeed{77}));
  EXPECT_NE(SampleCommunities(p, RngSeed{77}), SampleCommunities(p, RngSeed{78}));
}

TEST(SampleGraphTest, ZeroAffinityGivesEmptyGraph) {
  const ModelParams p(50, 2, 1, {50}, Eigen::MatrixXd::Constant(2, 1, 0.5),
                      Eigen::MatrixXd::Zero(2, 2));
  EXPECT_EQ(GenerateGraph(p, RngSeed{1}).num_edges(), 0u);
}

TEST(SampleGraphTest, FullAffinityGivesCompleteBlocks) {
  Eigen::MatrixXd c(2, 2);
  c << 20, 0, 0, 20;
  const ModelParams p(20, 2, 1, {20}, Eigen::MatrixXd::Constant(2, 1, 0.5), c);
  const AttributedGraph g = GenerateGraph(p, RngSeed{3});
  int ones = 0;
  for (int k : *g.truth()) ones += k == 0;
  const std::size_t want = ones * (ones - 1) / 2 + (20 - ones) * (19 - ones) / 2;
  EXPECT_EQ(g.num_edges(), want);
  for (const auto& [u, v] : g.edges()) EXPECT_EQ((*g.truth())[u], (*g.truth())[v]);
}

TEST(SampleGraphTest, Determinism) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 1000});
  const AttributedGraph a = GenerateGraph(p, RngSeed{9});
  const AttributedGraph b = GenerateGraph(p, RngSeed{9});
  std::ostringstream sa;
  std::ostringstream sb;
  WriteEdges(sa, a);
  WriteEdges(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.truth(), b.truth());
  EXPECT_NE(GenerateGraph(p, RngSeed{10}).edges(), a.edges());
}

TEST(SampleGraphTest, SimpleGraphLayoutAndExpectedSize) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 4000});
  const AttributedGraph g = GenerateGraph(p, RngSeed{2024});
  std::set<Edge> seen(g.edges().begin(), g.edges().end());
  EXPECT_EQ(seen.size(), g.num_edges());
  for (int i = 0; i < 4000; ++i) EXPECT_EQ(g.attrs()[i], i < 2000 ? 0 : 1);
  // Expected |E| is about n d / 2 = 10000.
  EXPECT_LE(std::abs(static_cast<double>(g.num_edges()) - 10000.0), 300.0);
}

TEST(SampleGraphTest, ProbabilityOneGivesCompleteGraph) {
  // c = n is the largest value ModelParams accepts.
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(1, 1, 4.0);
  const ModelParams p(4, 1, 1, {4}, Eigen::MatrixXd::Ones(1, 1), c);
  EXPECT_EQ(GenerateGraph(p, RngSeed{1}).num_edges(), 6u);
}

// Per-block binomial parameters for fixed labels.
struct Block {
  std::int64_t pairs;
  double p;
};

std::vector<Block> Blocks(const ModelParams& params, const std::vector<int>& labels) {
  const std::vector<int> attrs = params.CanonicalAttributes();
  std::vector<std::int64_t> size(params.K() * params.R(), 0);
  for (int i = 0; i < params.n(); ++i) ++size[params.cell(labels[i], attrs[i])];
  std::vector<Block> blocks;
  for (int s = 0; s < params.K() * params.R(); ++s) {
    for (int t = s; t < params.K() * params.R(); ++t) {
      const std::int64_t pairs =
          s == t ? size[s] * (size[s] - 1) / 2 : size[s] * size[t];
      blocks.push_back({pairs, params.affinity()(s, t) / params.n()});
    }
  }
  return blocks;
}

// Exact pmf of |E| as a convolution of the block binomials.
std::vector<double> EdgeCountPmf(const std::vector<Block>& blocks) {
  std::vector<double> pmf{1.0};
  for (const Block& b : blocks) {
    std::vector<double> bin(b.pairs + 1);
    for (std::int64_t m = 0; m <= b.pairs; ++m) {
      bin[m] = std::exp(std::lgamma(b.pairs + 1.0) - std::lgamma(m + 1.0) -
                        std::lgamma(b.pairs - m + 1.0) +
                        (b.p > 0 ? m * std::log(b.p) : (m == 0 ? 0 : -INFINITY)) +
                        (b.p < 1 ? (b.pairs - m) * std::log1p(-b.p)
                                 : (m == b.pairs ? 0 : -INFINITY)));
    }
    std::vector<double> next(pmf.size() + bin.size() - 1, 0.0);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      if (pmf[i] < 1e-300) continue;
      for (std::size_t j = 0; j < bin.size(); ++j) next[i + j] += pmf[i] * bin[j];
    }
    pmf = std::move(next);
  }
  return pmf;
}

// The O(n^2) reference: one Bernoulli draw per unordered pair.
std::size_t NaiveEdgeCount(const ModelParams& params,
                           const std::vector<int>& labels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<int> attrs = params.CanonicalAttributes();
  std::size_t count = 0;
  for (int i = 0; i < params.n(); ++i) {
    for (int j = i + 1; j < params.n(); ++j) {
      const double p = params.c(labels[i], attrs[i], labels[j], attrs[j]) / params.n();
      count += unit(rng) < p;
    }
  }
  return count;
}

// Pearson statistic over bins merged until each expects >= 5 draws.
// Returns {statistic, degrees of freedom}.
std::pair<double, int> ChiSquare(const std::vector<double>& pmf,
                                 const std::vector<std::size_t>& samples) {
  const double total = static_cast<double>(samples.size());
  std::vector<std::size_t> observed(pmf.size(), 0);
  for (std::size_t x : samples) ++observed[x];
  std::vector<double> exp_bins;
  std::vector<double> obs_bins;
  double e = 0.0;
  double o = 0.0;
  for (std::size_t x = 0; x < pmf.size(); ++x) {
    e += pmf[x] * total;
    o += observed[x];
    if (e >= 5.0) {
      exp_bins.push_back(e);
      obs_bins.push_back(o);
      e = o = 0.0;
    }
  }
  exp_bins.back() += e;
  obs_bins.back() += o;
  double stat = 0.0;
  for (std::size_t b = 0; b < exp_bins.size(); ++b) {
    stat += (obs_bins[b] - exp_bins[b]) * (obs_bins[b] - exp_bins[b]) / exp_bins[b];
  }
  return {stat, static_cast<int>(exp_bins.size()) - 1};
}

TEST(SampleGraphTest, BlockAndNaiveSamplersMatchExactEdgeCountLaw) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 200});
  const std::vector<int> labels = SampleCommunities(p, RngSeed{1});
  const std::vector<double> pmf = EdgeCountPmf(Blocks(p, labels));
  double mass = 0.0;
  for (double x : pmf) mass += x;
  ASSERT_NEAR(mass, 1.0, 1e-9);

  std::vector<std::size_t> block;
  std::vector<std::size_t> naive;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    block.push_back(SampleGraph(p, labels, RngSeed{s}).num_edges());
    naive.push_back(NaiveEdgeCount(p, labels, 1000 + s));
  }
  for (const auto* samples : {&block, &naive}) {
    const auto [stat, df] = ChiSquare(pmf, *samples);
    const double critical =
        boost::math::quantile(boost::math::chi_squared(df), 0.99);
    EXPECT_LT(stat, critical) << "df " << df;
  }
}

TEST(SampleGraphTest, PerBlockCountsWithinThreeSigma) {
  const ModelParams p = ExpandSymmetric({2, 2, 10, 6, 2, 400});
  const std::vector<int> labels = SampleCommunities(p, RngSeed{4});
  const std::vector<Block> blocks = Blocks(p, labels);
  const int reps = 200;
  std::vector<double> sum(blocks.size(), 0.0);
  for (int s = 0; s < reps; ++s) {
    const AttributedGraph g = SampleGraph(p, labels, RngSeed{static_cast<std::uint64_t>(s)});
    for (const auto& [u, v] : g.edges()) {
      int cu = p.cell(labels[u], g.attrs()[u]);
      int cv = p.cell(labels[v], g.attrs()[v]);
      if (cu > cv) std::swap(cu, cv);
      // Index of (cu, cv) in the upper-triangular block order.
      int idx = 0;
      for (int s2 = 0; s2 < cu; ++s2) idx += 4 - s2;
      idx += cv - cu;
      sum[idx] += 1.0;
    }
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double mean = blocks[b].pairs * blocks[b].p;
    const double sd = std::sqrt(blocks[b].pairs * blocks[b].p * (1 - blocks[b].p));
    EXPECT_NEAR(sum[b] / reps, mean, 3 * sd / std::sqrt(reps)) << "block " << b;
  }
}

TEST(SampleGraphTest, RejectsBadLabels) {
  const ModelParams p = ExpandSymmetric({2, 1, 3, 0, 1, 10});
  EXPECT_THROW(SampleGraph(p, std::vector<int>(9, 0), RngSeed{1}), Error);
  EXPECT_THROW(SampleGraph(p, std::vector<int>(10, 2), RngSeed{1}), Error);
}

}  // namespace
}  // namespace attrisbm
