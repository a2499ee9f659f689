#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <utility>
#include <vector>

namespace fsplit {

/// Directed graph on nodes 0..n-1. Every edge (h, i) is oriented with h < i,
/// so edges respect the resolvent evaluation order.
struct GraphSpec {
  using Edge = std::pair<int, int>;

  int n = 0;
  std::vector<Edge> edges;

  bool has_edge(int h, int i) const;
  int degree(int node) const;
  /// Neighbors of `node` in the underlying undirected graph.
  std::vector<int> neighbors(int node) const;
  bool connected() const;
  /// Throws Error(InvalidGraph) on out-of-range nodes, h >= i, or duplicates.
  void check_ordering() const;
};

/// Degree matrix minus adjacency of the underlying undirected graph.
Eigen::MatrixXd graph_laplacian(const GraphSpec& g);

/// True iff every edge of `sub` is an edge of `super`.
bool is_subgraph(const GraphSpec& sub, const GraphSpec& super);

/// Edges of `a` that are not edges of `b`.
GraphSpec edge_difference(const GraphSpec& a, const GraphSpec& b);

enum class GraphKind { Path, Ring, Complete };

GraphKind parse_graph_kind(std::string_view name);

/// path: (0,1),(1,2),...; ring: path plus (0,n-1); complete: all pairs.
GraphSpec graph_builders(GraphKind kind, int n);

}  // namespace fsplit
