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

#ifndef ATTRISBM_GRAPH_HPP_
#define ATTRISBM_GRAPH_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace attrisbm {

using Edge = std::pair<int, int>;

// Simple undirected graph with one attribute category per node and,
// optionally, the planted community of every node. Edges are stored as
// (i, j) with i < j, sorted, without duplicates. Immutable once built.
class AttributedGraph {
 public:
  // Throws attrisbm::Error on self-loops, duplicate edges, out-of-range
  // endpoints, or negative labels. Edges may be given in either
  // orientation; they are canonicalized and sorted.
  AttributedGraph(int n, std::vector<int> attrs, std::vector<Edge> edges,
                  std::optional<std::vector<int>> truth = std::nullopt);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<int>& attrs() const { return attrs_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::optional<std::vector<int>>& truth() const { return truth_; }

  // Largest attribute index + 1 (0 for an empty graph).
  int num_categories() const;

  // Same graph with the given ground truth attached.
  AttributedGraph WithTruth(std::vector<int> truth) const;

 private:
  int n_;
  std::vector<int> attrs_;
  std::vector<Edge> edges_;
  std::optional<std::vector<int>> truth_;
};

// Compressed adjacency. neighbors(i) lists the neighbors of i in
// increasing order; slot s in [offset[i], offset[i+1]) is also the id of
// the directed edge i -> neighbor[s], and reverse[s] is the slot of the
// opposite direction.
struct Adjacency {
  std::vector<int> offset;
  std::vector<int> neighbor;
  std::vector<int> reverse;

  explicit Adjacency(const AttributedGraph& graph);

  int degree(int i) const { return offset[i + 1] - offset[i]; }
  int num_directed() const { return static_cast<int>(neighbor.size()); }
};

// Text formats (1-based node and category indices):
//   edges: one "u v" per line, whitespace separated, '#' starts a comment;
//   attrs: one integer category per line, line number = node index;
//   truth: same layout as attrs, one community per line.
AttributedGraph ReadGraph(const std::filesystem::path& edge_file,
                          const std::filesystem::path& attr_file);
std::vector<int> ReadLabels(const std::filesystem::path& file);

void WriteEdges(std::ostream& out, const AttributedGraph& graph);
void WriteLabels(std::ostream& out, const std::vector<int>& labels);

// Parsers over streams; `source` names the input in error messages. Edges
// are returned 0-based. Self-loops, duplicates and (when num_nodes >= 0)
// out-of-range endpoints are reported with their line number.
std::vector<Edge> ParseEdges(std::istream& in, const std::string& source,
                             int num_nodes = -1);
std::vector<int> ParseLabels(std::istream& in, const std::string& source);

}  // namespace attrisbm

#endif  // ATTRISBM_GRAPH_HPP_
