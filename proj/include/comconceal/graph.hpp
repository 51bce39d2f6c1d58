#pragma once

#include <utility>
#include <vector>

#include "comconceal/linalg.hpp"

namespace comconceal {

using Edge = std::pair<int, int>;  // canonical form: (min, max)

inline Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

/// Undirected simple graph. Immutable after construction; edges are stored
/// in canonical (min,max) form, sorted lexicographically.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
  /// (in either orientation) and endpoints outside [0, n).
  static Graph from_edges(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  long num_edges() const { return static_cast<long>(edges_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& degrees() const { return deg_; }
  int degree(int u) const { return deg_[u]; }

  /// Neighbor list of u, sorted ascending.
  const std::vector<int>& neighbors(int u) const { return adj_[u]; }

  bool has_edge(int u, int v) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> deg_;
};

/// Hard community assignment. Labels are contiguous 0..k-1; canonicalization
/// renumbers by first appearance so any relabeling maps to the same object.
struct Partition {
  std::vector<int> labels;
  int k = 0;

  static Partition from_labels(const std::vector<int>& raw);

  int size() const { return static_cast<int>(labels.size()); }

  /// Member lists per community, each sorted ascending.
  std::vector<std::vector<int>> communities() const;
};

/// n x d real feature matrix; row i belongs to node i.
struct NodeFeatures {
  Mat values;

  NodeFeatures() = default;
  NodeFeatures(int n, int d) : values(n, d) {}

  int rows() const { return values.rows; }
  int dim() const { return values.cols; }
  double* row(int i) { return values.row(i); }
  const double* row(int i) const { return values.row(i); }

  /// Throws DimensionMismatch when row count differs from n or any entry is
  /// not finite.
  void validate_for(int n) const;
};

/// Edges of g with both endpoints inside `community`.
std::vector<Edge> intra_edges(const Graph& g, const std::vector<int>& community);

/// Largest connected component plus the map from new ids to original ids.
/// Ties between equal-size components go to the one containing the smallest
/// original node id.
std::pair<Graph, std::vector<int>> largest_connected_component(const Graph& g);

/// One node per community; an unweighted edge between two community nodes iff
/// at least one cross edge exists in g. No self-loops.
Graph quotient_graph(const Graph& g, const Partition& p);

}  // namespace comconceal
