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

#ifndef ATTRISBM_GENERATOR_HPP_
#define ATTRISBM_GENERATOR_HPP_

#include <vector>

#include "attrisbm/graph.hpp"
#include "attrisbm/model.hpp"
#include "attrisbm/rng.hpp"

namespace attrisbm {

// Draws the community of every node independently from the prior column
// of its attribute. Nodes follow ModelParams::CanonicalAttributes().
std::vector<int> SampleCommunities(const ModelParams& params, RngSeed seed);

// Samples the edge set given community labels. Every unordered pair (i, j)
// is present independently with probability c(cell_i, cell_j) / n.
//
// Nodes are grouped by (community, attribute) cell. For each cell pair the
// edge count is drawn from Binomial(#pairs, p) and that many distinct pairs
// are placed uniformly (Floyd's subset sampling), giving O(n + |E|)
// expected time and the same distribution as the per-pair loop.
AttributedGraph SampleGraph(const ModelParams& params,
                            const std::vector<int>& labels, RngSeed seed);

// SampleCommunities followed by SampleGraph, truth attached.
AttributedGraph GenerateGraph(const ModelParams& params, RngSeed seed);

}  // namespace attrisbm

#endif  // ATTRISBM_GENERATOR_HPP_
