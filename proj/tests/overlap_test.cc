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
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "attrisbm/error.hpp"
#include "attrisbm/overlap.hpp"

namespace attrisbm {
namespace {

Eigen::MatrixXd Uniform(int K, int R) { return Eigen::MatrixXd::Constant(K, R, 1.0 / K); }

TEST(OverlapTest, IdentityAndRelabelingScoreOne) {
  const std::vector<int> truth{0, 0, 1, 1, 0, 1};
  const std::vector<int> attrs(6, 0);
  EXPECT_EQ(ComputeOverlap(truth, truth, Uniform(2, 1), attrs).overlap, 1.0);
  const std::vector<int> swapped{1, 1, 0, 0, 1, 0};
  const OverlapScore s = ComputeOverlap(swapped, truth, Uniform(2, 1), attrs);
  EXPECT_EQ(s.overlap, 1.0);
  EXPECT_EQ(s.best_permutation, (std::vector<int>{1, 0}));
}

TEST(OverlapTest, HalfAgreementIsZero) {
  const std::vector<int> truth{0, 0, 1, 1};
  const std::vector<int> est{0, 1, 0, 1};
  EXPECT_EQ(ComputeOverlap(est, truth, Uniform(2, 2), std::vector<int>{0, 0, 1, 1}).overlap, 0.0);
}

TEST(OverlapTest, BlindBaselineUsesPriorPerAttribute) {
  // Attribute 0 nodes are 90% community 0, attribute 1 nodes 50/50.
  Eigen::MatrixXd prior(2, 2);
  prior << 0.9, 0.5, 0.1, 0.5;
  const std::vector<int> attrs{0, 0, 1, 1};
  const std::vector<int> truth{0, 0, 0, 1};
  const std::vector<int> est{0, 0, 0, 0};
  // blind = (2 * 0.9 + 2 * 0.5) / 4 = 0.7, raw = 0.75.
  EXPECT_NEAR(ComputeOverlap(est, truth, prior, attrs).overlap, (0.75 - 0.7) / 0.3, 1e-12);
}

TEST(OverlapTest, SingleCommunityIsPerfect) {
  const std::vector<int> z(5, 0);
  EXPECT_EQ(ComputeOverlap(z, z, Uniform(1, 1), z).overlap, 1.0);
}

TEST(OverlapTest, InvariantUnderRelabelingEstimate) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const int K = 2 + t % 5;
    std::uniform_int_distribution<int> label(0, K - 1);
    std::vector<int> truth(60);
    std::vector<int> est(60);
    for (int i = 0; i < 60; ++i) {
      truth[i] = label(rng);
      est[i] = label(rng);
    }
    std::vector<int> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> relabeled(60);
    for (int i = 0; i < 60; ++i) relabeled[i] = perm[est[i]];
    const std::vector<int> attrs(60, 0);
    EXPECT_DOUBLE_EQ(ComputeOverlap(est, truth, Uniform(K, 1), attrs).overlap,
                     ComputeOverlap(relabeled, truth, Uniform(K, 1), attrs).overlap);
  }
}

TEST(OverlapTest, RejectsBadInput) {
  const std::vector<int> a{0, 1};
  EXPECT_THROW(ComputeOverlap(a, std::vector<int>{0}, Uniform(2, 1), a), Error);
  EXPECT_THROW(ComputeOverlap(std::vector<int>{0, 2}, a, Uniform(2, 1), std::vector<int>{0, 0}), Error);
  EXPECT_THROW(ComputeOverlap(a, a, Uniform(2, 1), std::vector<int>{0, 1}), Error);
}

double BruteForceBest(const Eigen::MatrixXd& w) {
  std::vector<int> perm(w.rows());
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double s = 0.0;
    for (int k = 0; k < w.rows(); ++k) s += w(k, perm[k]);
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(MaxWeightAssignmentTest, MatchesBruteForce) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> u(0, 30);
  for (int t = 0; t < 40; ++t) {
    const int K = 1 + t % 9;
    Eigen::MatrixXd w(K, K);
    for (int i = 0; i < K; ++i) {
      for (int j = 0; j < K; ++j) w(i, j) = u(rng);
    }
    const std::vector<int> assignment = MaxWeightAssignment(w);
    std::vector<int> sorted = assignment;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < K; ++k) ASSERT_EQ(sorted[k], k);
    double got = 0.0;
    for (int k = 0; k < K; ++k) got += w(k, assignment[k]);
    EXPECT_EQ(got, BruteForceBest(w)) << "K=" << K;
  }
}

TEST(OverlapTest, LargeKUsesAssignmentAndStaysExact) {
  const int K = 10;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> label(0, K - 1);
  std::vector<int> truth(500);
  for (int& x : truth) x = label(rng);
  // Rotate labels and corrupt a fifth of them.
  std::vector<int> est(500);
  for (int i = 0; i < 500; ++i) est[i] = i % 5 == 0 ? label(rng) : (truth[i] + 3) % K;
  const OverlapScore s = ComputeOverlap(est, truth, Uniform(K, 1), std::vector<int>(500, 0));
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(K, K);
  for (int i = 0; i < 500; ++i) confusion(est[i], truth[i]) += 1.0;
  EXPECT_NEAR(s.raw_agreement, BruteForceBest(confusion) / 500.0, 1e-15);
  EXPECT_EQ(s.best_permutation[3], 0);
}

}  // namespace
}  // namespace attrisbm
