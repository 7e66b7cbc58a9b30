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

#include "attrisbm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <unordered_set>

#include "attrisbm/error.hpp"

namespace attrisbm {
namespace {

// Uniform m-subset of [0, population) by Floyd's algorithm, sorted.
std::vector<std::int64_t> SampleSubset(std::int64_t population,
                                       std::int64_t m, Engine& rng) {
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  for (std::int64_t j = population - m; j < population; ++j) {
    std::uniform_int_distribution<std::int64_t> pick(0, j);
    const std::int64_t t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::int64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Index of the unordered pair (i, j), i < j, in the order
// (0,1), (0,2), (1,2), (0,3), ...: index = j (j - 1) / 2 + i.
Edge DecodeTriangular(std::int64_t index) {
  auto j = static_cast<std::int64_t>(
      (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (j * (j - 1) / 2 > index) --j;
  while ((j + 1) * j / 2 <= index) ++j;
  const std::int64_t i = index - j * (j - 1) / 2;
  return {static_cast<int>(i), static_cast<int>(j)};
}

}  // namespace

std::vector<int> SampleCommunities(const ModelParams& params, RngSeed seed) {
  Engine rng = MakeEngine(seed, Stream::kCommunities);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int K = params.K();
  std::vector<int> labels;
  labels.reserve(params.n());
  for (int r : params.CanonicalAttributes()) {
    const double u = unit(rng);
    int chosen = -1;
    double cumulative = 0.0;
    for (int k = 0; k < K; ++k) {
      if (params.q(k, r) <= 0.0) continue;
      cumulative += params.q(k, r);
      chosen = k;
      if (u < cumulative) break;
    }
    labels.push_back(chosen);
  }
  return labels;
}

AttributedGraph SampleGraph(const ModelParams& params,
                            const std::vector<int>& labels, RngSeed seed) {
  const int n = params.n();
  const int K = params.K();
  const int R = params.R();
  if (static_cast<int>(labels.size()) != n) {
    throw Error(ErrorCode::kInvalidInput, "label count differs from n");
  }
  std::vector<int> attrs = params.CanonicalAttributes();
  std::vector<std::vector<int>> members(K * R);
  for (int i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= K) {
      std::ostringstream os;
      os << "node " << i + 1 << " has community " << labels[i] + 1
         << " outside [1, " << K << "]";
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
    members[params.cell(labels[i], attrs[i])].push_back(i);
  }

  Engine rng = MakeEngine(seed, Stream::kEdges);
  std::vector<Edge> edges;
  const int cells = K * R;
  for (int s = 0; s < cells; ++s) {
    for (int t = s; t < cells; ++t) {
      const double c = params.affinity()(s, t);
      if (c > n) {
        throw Error(ErrorCode::kInvalidInput,
                    "edge probability c / n exceeds 1");
      }
      const double p = c / n;
      const auto& ms = members[s];
      const auto& mt = members[t];
      const std::int64_t pairs =
          (s == t) ? static_cast<std::int64_t>(ms.size()) *
                         (static_cast<std::int64_t>(ms.size()) - 1) / 2
                   : static_cast<std::int64_t>(ms.size()) *
                         static_cast<std::int64_t>(mt.size());
      if (pairs == 0 || p <= 0.0) continue;
      std::binomial_distribution<std::int64_t> count_dist(pairs, p);
      const std::int64_t m = p >= 1.0 ? pairs : count_dist(rng);
      for (std::int64_t index : SampleSubset(pairs, m, rng)) {
        if (s == t) {
          const auto [a, b] = DecodeTriangular(index);
          edges.emplace_back(ms[a], ms[b]);
        } else {
          const auto width = static_cast<std::int64_t>(mt.size());
          edges.emplace_back(ms[index / width], mt[index % width]);
        }
      }
    }
  }
  return AttributedGraph(n, std::move(attrs), std::move(edges), labels);
}

AttributedGraph GenerateGraph(const ModelParams& params, RngSeed seed) {
  return SampleGraph(params, SampleCommunities(params, seed), seed);
}

}  // namespace attrisbm
