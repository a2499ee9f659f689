#include "fsplit/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fsplit/error.hpp"

namespace fsplit {

bool GraphSpec::has_edge(int h, int i) const {
  return std::find(edges.begin(), edges.end(), Edge{h, i}) != edges.end();
}

int GraphSpec::degree(int node) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(),
                                        [node](const Edge& e) {
                                          return e.first == node || e.second == node;
                                        }));
}

std::vector<int> GraphSpec::neighbors(int node) const {
  std::vector<int> out;
  for (const auto& [h, i] : edges) {
    if (h == node) out.push_back(i);
    if (i == node) out.push_back(h);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool GraphSpec::connected() const {
  if (n <= 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == n;
}

void GraphSpec::check_ordering() const {
  std::set<Edge> unique;
  for (const auto& [h, i] : edges) {
    if (h < 0 || i >= n || h >= i) {
      throw Error(ErrorKind::InvalidGraph,
                  "graph edge (" + std::to_string(h) + ", " + std::to_string(i) +
                      ") must satisfy 0 <= h < i < n");
    }
    if (!unique.insert({h, i}).second) {
      throw Error(ErrorKind::InvalidGraph, "graph has a duplicated edge");
    }
  }
}

Eigen::MatrixXd graph_laplacian(const GraphSpec& g) {
  g.check_ordering();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [h, i] : g.edges) {
    lap(h, h) += 1.0;
    lap(i, i) += 1.0;
    lap(h, i) -= 1.0;
    lap(i, h) -= 1.0;
  }
  return lap;
}

bool is_subgraph(const GraphSpec& sub, const GraphSpec& super) {
  if (sub.n != super.n) return false;
  return std::all_of(sub.edges.begin(), sub.edges.end(),
                     [&](const GraphSpec::Edge& e) {
                       return super.has_edge(e.first, e.second);
                     });
}

GraphSpec edge_difference(const GraphSpec& a, const GraphSpec& b) {
  GraphSpec out{a.n, {}};
  for (const auto& e : a.edges) {
    if (!b.has_edge(e.first, e.second)) out.edges.push_back(e);
  }
  return out;
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "path") return GraphKind::Path;
  if (name == "ring") return GraphKind::Ring;
  if (name == "complete") return GraphKind::Complete;
  throw Error(ErrorKind::InvalidParameters,
              "unknown graph kind '" + std::string(name) + "'");
}

GraphSpec graph_builders(GraphKind kind, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidGraph, "graphs need n >= 2");
  GraphSpec g{n, {}};
  switch (kind) {
    case GraphKind::Path:
    case GraphKind::Ring:
      for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
      if (kind == GraphKind::Ring && n > 2) g.edges.emplace_back(0, n - 1);
      break;
    case GraphKind::Complete:
      for (int h = 0; h < n; ++h) {
        for (int i = h + 1; i < n; ++i) g.edges.emplace_back(h, i);
      }
      break;
  }
  return g;
}

}  // namespace fsplit
