#include "comconceal/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>

#include "comconceal/errors.hpp"

namespace comconceal {

Graph Graph::from_edges(int n, std::vector<Edge> edges) {
  if (n < 0) fail(Errc::NodeOutOfRange, "negative node count");
  for (auto& [u, v] : edges) {
    if (u == v) fail(Errc::SelfLoop, "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    if (u < 0 || v < 0 || u >= n || v >= n)
      fail(Errc::NodeOutOfRange,
           "edge (" + std::to_string(u) + "," + std::to_string(v) + ") with n=" + std::to_string(n));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1])
      fail(Errc::DuplicateEdge, "edge (" + std::to_string(edges[i].first) + "," +
                                    std::to_string(edges[i].second) + ")");
  }

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.adj_.assign(n, {});
  g.deg_.assign(n, 0);
  for (const auto& [u, v] : g.edges_) {
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (int u = 0; u < n; ++u) {
    std::sort(g.adj_[u].begin(), g.adj_[u].end());
    g.deg_[u] = static_cast<int>(g.adj_[u].size());
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  if (u == v) return false;
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const int t = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(a.begin(), a.end(), t);
}

Partition Partition::from_labels(const std::vector<int>& raw) {
  Partition p;
  p.labels.resize(raw.size());
  std::vector<int> remap;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const int label = raw[i];
    if (label < 0) fail(Errc::ParseError, "negative community label");
    int id = -1;
    // Linear remap table keyed by the raw label; raw labels are expected to
    // be small non-negative ints.
    if (static_cast<std::size_t>(label) >= remap.size()) remap.resize(label + 1, -1);
    if (remap[label] == -1) {
      remap[label] = p.k++;
    }
    id = remap[label];
    p.labels[i] = id;
  }
  return p;
}

std::vector<std::vector<int>> Partition::communities() const {
  std::vector<std::vector<int>> out(k);
  for (int u = 0; u < size(); ++u) out[labels[u]].push_back(u);
  return out;
}

void NodeFeatures::validate_for(int n) const {
  if (rows() != n)
    fail(Errc::DimensionMismatch,
         "feature rows " + std::to_string(rows()) + " vs n=" + std::to_string(n));
  if (!all_finite(values)) fail(Errc::DimensionMismatch, "non-finite feature entry");
}

std::vector<Edge> intra_edges(const Graph& g, const std::vector<int>& community) {
  std::vector<char> in(g.num_nodes(), 0);
  for (int u : community) {
    if (u < 0 || u >= g.num_nodes()) fail(Errc::NodeOutOfRange, "community node " + std::to_string(u));
    in[u] = 1;
  }
  std::vector<Edge> out;
  for (const auto& [u, v] : g.edges()) {
    if (in[u] && in[v]) out.emplace_back(u, v);
  }
  return out;
}

std::pair<Graph, std::vector<int>> largest_connected_component(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  std::vector<long> comp_size;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    const int c = ncomp++;
    comp_size.push_back(0);
    std::queue<int> q;
    q.push(s);
    comp[s] = c;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      ++comp_size[c];
      for (int v : g.neighbors(u)) {
        if (comp[v] == -1) {
          comp[v] = c;
          q.push(v);
        }
      }
    }
  }
  // Components are discovered in order of their smallest node id, so the
  // first maximal-size component wins ties.
  int best = 0;
  for (int c = 1; c < ncomp; ++c) {
    if (comp_size[c] > comp_size[best]) best = c;
  }

  std::vector<int> new_to_old;
  std::vector<int> old_to_new(n, -1);
  for (int u = 0; u < n; ++u) {
    if (comp[u] == best) {
      old_to_new[u] = static_cast<int>(new_to_old.size());
      new_to_old.push_back(u);
    }
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) {
    if (comp[u] == best && comp[v] == best)
      edges.emplace_back(old_to_new[u], old_to_new[v]);
  }
  return {Graph::from_edges(static_cast<int>(new_to_old.size()), std::move(edges)), new_to_old};
}

Graph quotient_graph(const Graph& g, const Partition& p) {
  if (p.size() != g.num_nodes()) fail(Errc::DimensionMismatch, "partition does not cover graph");
  std::set<Edge> qedges;
  for (const auto& [u, v] : g.edges()) {
    const int cu = p.labels[u];
    const int cv = p.labels[v];
    if (cu != cv) qedges.insert(make_edge(cu, cv));
  }
  return Graph::from_edges(p.k, std::vector<Edge>(qedges.begin(), qedges.end()));
}

}  // namespace comconceal
