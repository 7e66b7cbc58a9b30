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

// Parameters of the stochastic block model with categorical node attributes.
//
// Each node carries an attribute category r (R categories) and a latent
// community k (K communities). The community of a node in category r is
// drawn from the prior column q(., r). An edge between nodes in cells
// (k, r) and (k', r') appears with probability c((k,r),(k',r')) / n.
//
// Indexing: all indices are 0-based in the API. Cell (k, r) occupies row
// and column k * R + r of the affinity matrix, so the cells of a community
// are contiguous. File formats use 1-based indices; conversion happens in
// the I/O layer only.

#ifndef ATTRISBM_MODEL_HPP_
#define ATTRISBM_MODEL_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace attrisbm {

// Bijection between m raw categorical attributes and a single category
// index. Mixed-radix, row-major: the last attribute varies fastest.
class AttributeEncoder {
 public:
  explicit AttributeEncoder(std::vector<int> cardinalities);

  // raw[i] is 1-based in [1, cardinalities[i]]; returns r in [1, R].
  int Encode(std::span<const int> raw) const;
  // Inverse of Encode.
  std::vector<int> Decode(int r) const;

  int num_categories() const { return num_categories_; }
  const std::vector<int>& cardinalities() const { return cardinalities_; }

 private:
  std::vector<int> cardinalities_;
  int num_categories_ = 1;
};

// Immutable, validated model parameters.
class ModelParams {
 public:
  // Validates every invariant and throws attrisbm::Error on violation:
  //   group_sizes has R nonnegative entries summing to n;
  //   prior is K x R, nonnegative, columns summing to 1;
  //   affinity is KR x KR, symmetric, entries in [0, n].
  ModelParams(int n, int K, int R, std::vector<int> group_sizes,
              Eigen::MatrixXd prior, Eigen::MatrixXd affinity);

  int n() const { return n_; }
  int K() const { return K_; }
  int R() const { return R_; }
  const std::vector<int>& group_sizes() const { return group_sizes_; }
  const Eigen::MatrixXd& prior() const { return prior_; }
  const Eigen::MatrixXd& affinity() const { return affinity_; }

  int cell(int k, int r) const { return k * R_ + r; }
  double q(int k, int r) const { return prior_(k, r); }
  // Rescaled affinity c((k1,r1),(k2,r2)).
  double c(int k1, int r1, int k2, int r2) const {
    return affinity_(cell(k1, r1), cell(k2, r2));
  }

  // Attribute of every node under the canonical layout: the first
  // group_sizes[0] nodes are category 0, and so on.
  std::vector<int> CanonicalAttributes() const;

 private:
  int n_;
  int K_;
  int R_;
  std::vector<int> group_sizes_;
  Eigen::MatrixXd prior_;
  Eigen::MatrixXd affinity_;
};

// The three-value symmetric model: a within community and attribute, b
// within community across attributes, c across communities.
struct SymmetricSpec {
  int K = 2;
  int R = 2;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int n = 0;
};

// Uniform prior, equal group sizes n / R.
ModelParams ExpandSymmetric(const SymmetricSpec& spec);

// Expected degree of a uniformly chosen node, with self pairs counted:
//   (1 / n^2) sum_{r,r'} n_r n_r' sum_{k,k'} q(k,r) q(k',r') c((k,r),(k',r')).
// Dropping self pairs would only shift this by O(1/n).
double AverageDegree(const ModelParams& params);

inline constexpr double kEqualDegreeTol = 1e-9;

// True iff, for every attribute pair (a, b), (n_b / (n K)) sum_k2 c((k1,a),
// (k2,b)) is the same for every k1 within `tol` (absolute).
bool CheckEqualDegree(const ModelParams& params, double tol = kEqualDegreeTol);

// Inverse of the degree map for symmetric specs: returns (a, b, c) with
// a = eta * b, c = epsilon * b and AverageDegree equal to avg_degree.
struct AbcTriple {
  double a;
  double b;
  double c;
};
AbcTriple ResolveAbc(double eta, double epsilon, double avg_degree, int K,
                     int R);

}  // namespace attrisbm

#endif  // ATTRISBM_MODEL_HPP_
