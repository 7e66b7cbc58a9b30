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

#include "attrisbm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "attrisbm/error.hpp"

namespace attrisbm {
namespace {

[[noreturn]] void ParseFail(const std::string& source, int line,
                            const std::string& msg) {
  std::ostringstream os;
  os << source << ":" << line << ": " << msg;
  throw Error(ErrorCode::kInvalidInput, os.str());
}

// Strips a trailing '#' comment and surrounding whitespace.
std::string StripComment(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

AttributedGraph::AttributedGraph(int n, std::vector<int> attrs,
                                 std::vector<Edge> edges,
                                 std::optional<std::vector<int>> truth)
    : n_(n),
      attrs_(std::move(attrs)),
      edges_(std::move(edges)),
      truth_(std::move(truth)) {
  if (n_ < 0) throw Error(ErrorCode::kInvalidInput, "negative node count");
  if (static_cast<int>(attrs_.size()) != n_) {
    std::ostringstream os;
    os << "got " << attrs_.size() << " attributes for " << n_ << " nodes";
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
  for (int r : attrs_) {
    if (r < 0) throw Error(ErrorCode::kInvalidInput, "negative attribute");
  }
  if (truth_) {
    if (static_cast<int>(truth_->size()) != n_) {
      throw Error(ErrorCode::kInvalidInput, "truth length differs from n");
    }
    for (int k : *truth_) {
      if (k < 0) throw Error(ErrorCode::kInvalidInput, "negative community");
    }
  }
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) {
      std::ostringstream os;
      os << "edge (" << u + 1 << "," << v + 1 << ") outside [1, " << n_ << "]";
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
    if (u == v) {
      std::ostringstream os;
      os << "self-loop at node " << u + 1;
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
    if (u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  const auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    std::ostringstream os;
    os << "duplicate edge (" << dup->first + 1 << "," << dup->second + 1 << ")";
    throw Error(ErrorCode::kInvalidInput, os.str());
  }
}

int AttributedGraph::num_categories() const {
  if (attrs_.empty()) return 0;
  return *std::max_element(attrs_.begin(), attrs_.end()) + 1;
}

AttributedGraph AttributedGraph::WithTruth(std::vector<int> truth) const {
  return AttributedGraph(n_, attrs_, edges_, std::move(truth));
}

Adjacency::Adjacency(const AttributedGraph& graph) {
  const int n = graph.num_nodes();
  offset.assign(n + 1, 0);
  for (const auto& [u, v] : graph.edges()) {
    ++offset[u + 1];
    ++offset[v + 1];
  }
  for (int i = 0; i < n; ++i) offset[i + 1] += offset[i];
  neighbor.assign(offset[n], 0);
  reverse.assign(offset[n], 0);
  std::vector<int> fill(offset.begin(), offset.end() - 1);
  for (const auto& [u, v] : graph.edges()) neighbor[fill[v]++] = u;
  for (const auto& [u, v] : graph.edges()) neighbor[fill[u]++] = v;
  for (int i = 0; i < n; ++i) {
    std::sort(neighbor.begin() + offset[i], neighbor.begin() + offset[i + 1]);
  }
  for (int i = 0; i < n; ++i) {
    for (int s = offset[i]; s < offset[i + 1]; ++s) {
      const int j = neighbor[s];
      const auto first = neighbor.begin() + offset[j];
      const auto last = neighbor.begin() + offset[j + 1];
      reverse[s] = static_cast<int>(std::lower_bound(first, last, i) -
                                    neighbor.begin());
    }
  }
}

std::vector<Edge> ParseEdges(std::istream& in, const std::string& source,
                             int num_nodes) {
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = StripComment(raw);
    if (body.empty()) continue;
    std::istringstream fields(body);
    long long u = 0;
    long long v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) {
      ParseFail(source, line, "expected two node indices, got '" + body + "'");
    }
    if (u < 1 || v < 1 || (num_nodes >= 0 && (u > num_nodes || v > num_nodes))) {
      std::ostringstream os;
      os << "node index out of range in '" << body << "'";
      if (num_nodes >= 0) os << " (n = " << num_nodes << ")";
      ParseFail(source, line, os.str());
    }
    if (u == v) ParseFail(source, line, "self-loop '" + body + "'");
    Edge e{static_cast<int>(std::min(u, v)) - 1,
           static_cast<int>(std::max(u, v)) - 1};
    if (!seen.insert(e).second) {
      ParseFail(source, line, "duplicate edge '" + body + "'");
    }
    edges.push_back(e);
  }
  return edges;
}

std::vector<int> ParseLabels(std::istream& in, const std::string& source) {
  std::vector<int> labels;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = StripComment(raw);
    if (body.empty()) continue;
    std::istringstream fields(body);
    long long value = 0;
    std::string extra;
    if (!(fields >> value) || (fields >> extra)) {
      ParseFail(source, line, "expected one integer, got '" + body + "'");
    }
    if (value < 1 || value > std::numeric_limits<int>::max()) {
      ParseFail(source, line, "index must be >= 1, got '" + body + "'");
    }
    labels.push_back(static_cast<int>(value) - 1);
  }
  return labels;
}

AttributedGraph ReadGraph(const std::filesystem::path& edge_file,
                          const std::filesystem::path& attr_file) {
  auto attr_in = OpenOrThrow(attr_file);
  std::vector<int> attrs = ParseLabels(attr_in, attr_file.string());
  const int n = static_cast<int>(attrs.size());
  auto edge_in = OpenOrThrow(edge_file);
  std::vector<Edge> edges = ParseEdges(edge_in, edge_file.string(), n);
  return AttributedGraph(n, std::move(attrs), std::move(edges));
}

std::vector<int> ReadLabels(const std::filesystem::path& file) {
  auto in = OpenOrThrow(file);
  return ParseLabels(in, file.string());
}

void WriteEdges(std::ostream& out, const AttributedGraph& graph) {
  for (const auto& [u, v] : graph.edges()) out << u + 1 << ' ' << v + 1 << '\n';
}

void WriteLabels(std::ostream& out, const std::vector<int>& labels) {
  for (int x : labels) out << x + 1 << '\n';
}

}  // namespace attrisbm
