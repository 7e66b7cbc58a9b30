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
#include <map>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "attrisbm/error.hpp"
#include "attrisbm/parallel.hpp"
#include "attrisbm/spectral.hpp"

namespace attrisbm {
namespace {

// Nodes sharing an attribute and the same multiset of edge types on their
// root path carry the same weight prod upsilon_e^(2 counts_e).
using PathClass = std::pair<int, std::vector<int>>;
using Level = std::map<PathClass, std::int64_t>;

double ExpectedTreeSize(const EdgeTypeSystem& sys, int root, int depth) {
  Eigen::RowVectorXd level = Eigen::RowVectorXd::Zero(sys.R);
  level(root) = 1.0;
  double total = 1.0;
  for (int d = 1; d <= depth; ++d) {
    level = level * sys.cab;
    total += level.sum();
  }
  return total;
}

std::vector<double> GrowOneTree(const EdgeTypeSystem& sys,
                                const std::vector<double>& weight_factor,
                                int root, int depth, Engine& rng) {
  const int types = sys.R * sys.R;
  std::vector<double> z(depth + 1, 0.0);
  Level level;
  level[{root, std::vector<int>(types, 0)}] = 1;
  z[0] = 1.0;
  for (int d = 1; d <= depth && !level.empty(); ++d) {
    Level next;
    for (const auto& [cls, count] : level) {
      const int a = cls.first;
      for (int b = 0; b < sys.R; ++b) {
        const double mean = static_cast<double>(count) * sys.cab(a, b);
        if (mean <= 0.0) continue;
        std::poisson_distribution<std::int64_t> children(mean);
        const std::int64_t m = children(rng);
        if (m == 0) continue;
        std::vector<int> counts = cls.second;
        ++counts[sys.type(a, b)];
        next[{b, std::move(counts)}] += m;
      }
    }
    double sum = 0.0;
    for (const auto& [cls, count] : next) {
      double w = 1.0;
      for (int e = 0; e < types; ++e) {
        if (cls.second[e] > 0) w *= std::pow(weight_factor[e], cls.second[e]);
      }
      sum += static_cast<double>(count) * w;
    }
    z[d] = sum;
    level = std::move(next);
  }
  return z;
}

}  // namespace

GrowthEstimate SimulatePerturbationGrowth(const EdgeTypeSystem& sys,
                                          const Eigen::MatrixXd& prior,
                                          int depth, int trials, RngSeed seed,
                                          const GrowthOptions& options) {
  if (depth < 1 || trials < 1) {
    throw Error(ErrorCode::kInvalidInput, "depth and trials must be >= 1");
  }
  if (options.root_attribute < 0 || options.root_attribute >= sys.R) {
    throw Error(ErrorCode::kInvalidInput, "root attribute out of range");
  }
  const double expected = ExpectedTreeSize(sys, options.root_attribute, depth);
  if (expected > options.node_budget) {
    std::ostringstream os;
    os << "expected tree size " << expected << " exceeds node budget "
       << options.node_budget;
    throw Error(ErrorCode::kBudget, os.str());
  }

  const Eigen::MatrixXd radii = TransferRadii(sys, prior);
  std::vector<double> weight_factor(sys.R * sys.R);
  for (int e = 0; e < sys.R * sys.R; ++e) {
    const double u = radii(sys.near_end(e), sys.far_end(e));
    weight_factor[e] = u * u;
  }

  std::vector<std::vector<double>> per_trial(trials);
  ParallelFor(trials, options.jobs, [&](std::size_t t) {
    Engine rng(HashSeed(seed.value,
                        {static_cast<std::uint64_t>(Stream::kBranching), t}));
    per_trial[t] =
        GrowOneTree(sys, weight_factor, options.root_attribute, depth, rng);
  });

  GrowthEstimate out;
  out.level_means.assign(depth + 1, 0.0);
  for (const auto& z : per_trial) {
    for (int d = 0; d <= depth; ++d) out.level_means[d] += z[d];
  }
  for (double& m : out.level_means) m /= trials;

  const int first = depth >= 2 ? 1 : 0;
  for (int d = first; d <= depth; ++d) {
    if (out.level_means[d] <= 0.0) {
      out.rate = 0.0;
      return out;
    }
  }
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  const int points = depth - first + 1;
  for (int d = first; d <= depth; ++d) {
    const double y = std::log(out.level_means[d]);
    sx += d;
    sy += y;
    sxx += static_cast<double>(d) * d;
    sxy += d * y;
  }
  const double slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
  out.rate = std::exp(slope);
  return out;
}

}  // namespace attrisbm
