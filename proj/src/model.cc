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

#include "attrisbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "attrisbm/error.hpp"

namespace attrisbm {
namespace {

// Column sums of the prior must hit 1 to this accuracy.
constexpr double kSimplexTol = 1e-9;

[[noreturn]] void Fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace

AttributeEncoder::AttributeEncoder(std::vector<int> cardinalities)
    : cardinalities_(std::move(cardinalities)) {
  if (cardinalities_.empty()) {
    Fail(ErrorCode::kInvalidInput, "attribute encoder needs at least one attribute");
  }
  std::int64_t product = 1;
  for (std::size_t i = 0; i < cardinalities_.size(); ++i) {
    if (cardinalities_[i] <= 0) {
      std::ostringstream os;
      os << "attribute " << i + 1 << " has non-positive cardinality "
         << cardinalities_[i];
      Fail(ErrorCode::kInvalidInput, os.str());
    }
    product *= cardinalities_[i];
    if (product > std::numeric_limits<int>::max()) {
      Fail(ErrorCode::kInvalidInput, "attribute product space too large");
    }
  }
  num_categories_ = static_cast<int>(product);
}

int AttributeEncoder::Encode(std::span<const int> raw) const {
  if (raw.size() != cardinalities_.size()) {
    std::ostringstream os;
    os << "expected " << cardinalities_.size() << " attributes, got "
       << raw.size();
    Fail(ErrorCode::kInvalidInput, os.str());
  }
  int r = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 1 || raw[i] > cardinalities_[i]) {
      std::ostringstream os;
      os << "attribute at position " << i + 1 << " is " << raw[i]
         << ", outside [1, " << cardinalities_[i] << "]";
      Fail(ErrorCode::kInvalidInput, os.str());
    }
    r = r * cardinalities_[i] + (raw[i] - 1);
  }
  return r + 1;
}

std::vector<int> AttributeEncoder::Decode(int r) const {
  if (r < 1 || r > num_categories_) {
    std::ostringstream os;
    os << "category " << r << " outside [1, " << num_categories_ << "]";
    Fail(ErrorCode::kInvalidInput, os.str());
  }
  std::vector<int> raw(cardinalities_.size());
  int rest = r - 1;
  for (std::size_t i = cardinalities_.size(); i-- > 0;) {
    raw[i] = rest % cardinalities_[i] + 1;
    rest /= cardinalities_[i];
  }
  return raw;
}

ModelParams::ModelParams(int n, int K, int R, std::vector<int> group_sizes,
                         Eigen::MatrixXd prior, Eigen::MatrixXd affinity)
    : n_(n),
      K_(K),
      R_(R),
      group_sizes_(std::move(group_sizes)),
      prior_(std::move(prior)),
      affinity_(std::move(affinity)) {
  if (n_ <= 0 || K_ <= 0 || R_ <= 0) {
    Fail(ErrorCode::kInvalidInput, "n, K and R must be positive");
  }
  if (static_cast<int>(group_sizes_.size()) != R_) {
    Fail(ErrorCode::kInvalidInput, "group_sizes must have R entries");
  }
  std::int64_t total = 0;
  for (int s : group_sizes_) {
    if (s < 0) Fail(ErrorCode::kInvalidInput, "negative group size");
    total += s;
  }
  if (total != n_) {
    std::ostringstream os;
    os << "group sizes sum to " << total << ", expected n = " << n_;
    Fail(ErrorCode::kInvalidInput, os.str());
  }
  if (prior_.rows() != K_ || prior_.cols() != R_) {
    Fail(ErrorCode::kInvalidInput, "prior must be K x R");
  }
  for (int r = 0; r < R_; ++r) {
    double sum = 0.0;
    for (int k = 0; k < K_; ++k) {
      if (!(prior_(k, r) >= 0.0)) {
        Fail(ErrorCode::kInvalidInput, "prior entries must be nonnegative");
      }
      sum += prior_(k, r);
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
      std::ostringstream os;
      os << "prior column " << r + 1 << " sums to " << sum;
      Fail(ErrorCode::kInvalidInput, os.str());
    }
  }
  const int cells = K_ * R_;
  if (affinity_.rows() != cells || affinity_.cols() != cells) {
    Fail(ErrorCode::kInvalidInput, "affinity must be KR x KR");
  }
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const double v = affinity_(i, j);
      if (!(v >= 0.0) || v > n_) {
        std::ostringstream os;
        os << "affinity entry (" << i + 1 << "," << j + 1 << ") = " << v
           << " outside [0, n]";
        Fail(ErrorCode::kInvalidInput, os.str());
      }
      if (v != affinity_(j, i)) {
        std::ostringstream os;
        os << "affinity is not symmetric at (" << i + 1 << "," << j + 1 << ")";
        Fail(ErrorCode::kInvalidInput, os.str());
      }
    }
  }
}

std::vector<int> ModelParams::CanonicalAttributes() const {
  std::vector<int> attrs;
  attrs.reserve(n_);
  for (int r = 0; r < R_; ++r) attrs.insert(attrs.end(), group_sizes_[r], r);
  return attrs;
}

ModelParams ExpandSymmetric(const SymmetricSpec& spec) {
  if (spec.K <= 0 || spec.R <= 0 || spec.n <= 0) {
    Fail(ErrorCode::kInvalidInput, "K, R and n must be positive");
  }
  // b is unused when R = 1, so only a >= c >= 0 is required there.
  const bool ordered = spec.R == 1 ? spec.a >= spec.c
                                   : (spec.a >= spec.b && spec.b >= spec.c);
  if (!(spec.c >= 0.0) || !ordered) {
    std::ostringstream os;
    os << "symmetric spec requires a >= b >= c >= 0, got a=" << spec.a
       << " b=" << spec.b << " c=" << spec.c;
    Fail(ErrorCode::kConstraintViolation, os.str());
  }
  if (spec.n % spec.R != 0) {
    std::ostringstream os;
    os << "n = " << spec.n << " is not divisible by R = " << spec.R;
    Fail(ErrorCode::kInvalidInput, os.str());
  }
  const int K = spec.K;
  const int R = spec.R;
  Eigen::MatrixXd prior = Eigen::MatrixXd::Constant(K, R, 1.0 / K);
  Eigen::MatrixXd affinity(K * R, K * R);
  for (int k1 = 0; k1 < K; ++k1) {
    for (int r1 = 0; r1 < R; ++r1) {
      for (int k2 = 0; k2 < K; ++k2) {
        for (int r2 = 0; r2 < R; ++r2) {
          double v = spec.c;
          if (k1 == k2) v = (r1 == r2) ? spec.a : spec.b;
          if (R == 1 && k1 == k2) v = spec.a;
          affinity(k1 * R + r1, k2 * R + r2) = v;
        }
      }
    }
  }
  return ModelParams(spec.n, K, R, std::vector<int>(R, spec.n / R),
                     std::move(prior), std::move(affinity));
}

double AverageDegree(const ModelParams& params) {
  const int K = params.K();
  const int R = params.R();
  const double n = params.n();
  double total = 0.0;
  for (int r1 = 0; r1 < R; ++r1) {
    for (int r2 = 0; r2 < R; ++r2) {
      double expected_c = 0.0;
      for (int k1 = 0; k1 < K; ++k1) {
        for (int k2 = 0; k2 < K; ++k2) {
          expected_c += params.q(k1, r1) * params.q(k2, r2) *
                        params.c(k1, r1, k2, r2);
        }
      }
      total += (params.group_sizes()[r1] / n) *
               (params.group_sizes()[r2] / n) * expected_c;
    }
  }
  return total;
}

bool CheckEqualDegree(const ModelParams& params, double tol) {
  const int K = params.K();
  const int R = params.R();
  for (int a = 0; a < R; ++a) {
    for (int b = 0; b < R; ++b) {
      const double scale =
          static_cast<double>(params.group_sizes()[b]) / (params.n() * K);
      double lo = 0.0;
      double hi = 0.0;
      for (int k1 = 0; k1 < K; ++k1) {
        double row = 0.0;
        for (int k2 = 0; k2 < K; ++k2) row += params.c(k1, a, k2, b);
        row *= scale;
        if (k1 == 0) {
          lo = hi = row;
        } else {
          lo = std::min(lo, row);
          hi = std::max(hi, row);
        }
      }
      if (hi - lo > tol) return false;
    }
  }
  return true;
}

AbcTriple ResolveAbc(double eta, double epsilon, double avg_degree, int K,
                     int R) {
  if (!(eta >= 1.0)) {
    Fail(ErrorCode::kConstraintViolation, "eta must be >= 1 (a >= b)");
  }
  if (!(epsilon >= 0.0) || epsilon > 1.0) {
    Fail(ErrorCode::kConstraintViolation,
         "epsilon must lie in [0, 1] (b >= c >= 0)");
  }
  if (!(avg_degree > 0.0) || K <= 0 || R <= 0) {
    Fail(ErrorCode::kInvalidInput, "avg_degree, K and R must be positive");
  }
  // AverageDegree of the symmetric model is (a + (R-1) b + (K-1) R c) / (K R),
  // linear in b once a = eta b and c = epsilon b.
  const double per_unit_b =
      (eta + (R - 1) + (K - 1) * R * epsilon) / (static_cast<double>(K) * R);
  const double b = avg_degree / per_unit_b;
  return {eta * b, b, epsilon * b};
}

}  // namespace attrisbm
