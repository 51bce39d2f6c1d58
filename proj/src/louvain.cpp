#include "comconceal/louvain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <vector>

#include "comconceal/errors.hpp"

namespace comconceal {

namespace {

// Weighted view used across aggregation levels. Diagonal entries follow the
// W_uu = 2 * (internal weight) convention so strengths satisfy the weighted
// handshake identity.
struct LevelGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // off-diagonal
  std::vector<double> self;                               // W_uu
  std::vector<double> strength;                           // row sums incl. diagonal
  double total = 0.0;                                     // sum of all strengths (= 2m)
};

LevelGraph level_from_graph(const Graph& g) {
  LevelGraph lg;
  lg.n = g.num_nodes();
  lg.adj.assign(lg.n, {});
  lg.self.assign(lg.n, 0.0);
  for (const auto& [u, v] : g.edges()) {
    lg.adj[u].emplace_back(v, 1.0);
    lg.adj[v].emplace_back(u, 1.0);
  }
  lg.strength.assign(lg.n, 0.0);
  for (int u = 0; u < lg.n; ++u) {
    double s = lg.self[u];
    for (const auto& [v, w] : lg.adj[u]) s += w;
    lg.strength[u] = s;
    lg.total += s;
  }
  return lg;
}

// One level of local moving. Returns the node->community labels and whether
// any node moved.
bool local_moving(const LevelGraph& lg, Rng& rng, std::vector<int>& comm) {
  const int n = lg.n;
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot(lg.strength);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<double> weight_to(n, 0.0);
  std::vector<int> touched;

  bool any_move = false;
  bool improved = true;
  int passes = 0;
  while (improved && passes++ < 1000) {
    improved = false;
    for (int u : order) {
      const int old_c = comm[u];
      touched.clear();
      weight_to[old_c] = 0.0;
      touched.push_back(old_c);
      for (const auto& [v, w] : lg.adj[u]) {
        const int c = comm[v];
        if (weight_to[c] == 0.0 && c != old_c &&
            std::find(touched.begin(), touched.end(), c) == touched.end())
          touched.push_back(c);
        weight_to[c] += w;
      }
      // Remove u from its community.
      tot[old_c] -= lg.strength[u];
      const double su = lg.strength[u];
      double best_gain = weight_to[old_c] - tot[old_c] * su / lg.total;
      int best_c = old_c;
      for (int c : touched) {
        const double gain = weight_to[c] - tot[c] * su / lg.total;
        if (gain > best_gain + 1e-12 || (std::abs(gain - best_gain) <= 1e-12 && c < best_c)) {
          best_gain = gain;
          best_c = c;
        }
      }
      tot[best_c] += su;
      if (best_c != old_c) {
        comm[u] = best_c;
        improved = true;
        any_move = true;
      }
      for (int c : touched) weight_to[c] = 0.0;
    }
  }
  return any_move;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& comm, int k) {
  LevelGraph out;
  out.n = k;
  out.adj.assign(k, {});
  out.self.assign(k, 0.0);
  std::vector<std::map<int, double>> acc(k);
  for (int u = 0; u < lg.n; ++u) {
    const int cu = comm[u];
    out.self[cu] += lg.self[u];
    for (const auto& [v, w] : lg.adj[u]) {
      const int cv = comm[v];
      if (cu == cv)
        out.self[cu] += w;  // both orientations visit, giving 2x internal
      else
        acc[cu][cv] += w;
    }
  }
  for (int c = 0; c < k; ++c) {
    for (const auto& [v, w] : acc[c]) out.adj[c].emplace_back(v, w);
  }
  out.strength.assign(k, 0.0);
  for (int c = 0; c < k; ++c) {
    double s = out.self[c];
    for (const auto& [v, w] : out.adj[c]) s += w;
    out.strength[c] = s;
    out.total += s;
  }
  return out;
}

}  // namespace

Partition louvain(const Graph& g, Rng& rng) {
  if (g.num_edges() < 1) fail(Errc::EmptyGraph, "louvain on edgeless graph");
  const int n = g.num_nodes();
  std::vector<int> node_to_comm(n);
  std::iota(node_to_comm.begin(), node_to_comm.end(), 0);

  LevelGraph lg = level_from_graph(g);
  while (true) {
    std::vector<int> comm;
    const bool moved = local_moving(lg, rng, comm);
    if (!moved) break;
    // Renumber communities densely.
    std::vector<int> remap(lg.n, -1);
    int k = 0;
    for (int u = 0; u < lg.n; ++u) {
      if (remap[comm[u]] == -1) remap[comm[u]] = k++;
    }
    for (int u = 0; u < lg.n; ++u) comm[u] = remap[comm[u]];
    for (int u = 0; u < n; ++u) node_to_comm[u] = comm[node_to_comm[u]];
    if (k == lg.n) break;
    lg = aggregate(lg, comm, k);
    if (k == 1) break;
  }
  return Partition::from_labels(node_to_comm);
}

Partition consensus_louvain(const Graph& g, int runs, double tau, std::uint64_t seed) {
  if (g.num_edges() < 1) fail(Errc::EmptyGraph, "consensus on edgeless graph");
  if (runs < 1 || tau <= 0.0 || tau > 1.0) fail(Errc::ConfigError, "runs >= 1 and 0 < tau <= 1");
  const int n = g.num_nodes();

  std::vector<Partition> parts(runs);
#pragma omp parallel for schedule(dynamic) if (runs > 1)
  for (int r = 0; r < runs; ++r) {
    Rng rng(seed_mix(seed, {0x10, static_cast<std::uint64_t>(r)}));
    parts[r] = louvain(g, rng);
  }

  // Co-assignment counts over node pairs; integer sums are merge-order
  // independent.
  std::unordered_map<std::uint64_t, int> counts;
  auto key = [n](int u, int v) {
    return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v;
  };
  for (const Partition& p : parts) {
    for (const auto& comm : p.communities()) {
      for (std::size_t i = 0; i < comm.size(); ++i) {
        for (std::size_t j = i + 1; j < comm.size(); ++j) ++counts[key(comm[i], comm[j])];
      }
    }
  }

  const double min_count = tau * runs;
  std::vector<std::vector<int>> agree(n);
  for (const auto& [k, c] : counts) {
    if (c + 1e-12 >= min_count) {
      const int u = static_cast<int>(k / n);
      const int v = static_cast<int>(k % n);
      agree[u].push_back(v);
      agree[v].push_back(u);
    }
  }

  // Connected components of the agreement graph.
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    const int c = ncomp++;
    std::queue<int> q;
    q.push(s);
    comp[s] = c;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : agree[u]) {
        if (comp[v] == -1) {
          comp[v] = c;
          q.push(v);
        }
      }
    }
  }
  std::vector<std::vector<int>> comp_members(ncomp);
  for (int u = 0; u < n; ++u) comp_members[comp[u]].push_back(u);

  // One re-clustering pass for components whose mean internal agreement is
  // below tau.
  std::vector<int> labels(n, -1);
  int next_label = 0;
  for (int c = 0; c < ncomp; ++c) {
    const auto& mem = comp_members[c];
    bool needs_recluster = false;
    if (mem.size() >= 2) {
      double sum_freq = 0.0;
      for (std::size_t i = 0; i < mem.size(); ++i) {
        for (std::size_t j = i + 1; j < mem.size(); ++j) {
          auto it = counts.find(key(mem[i], mem[j]));
          if (it != counts.end()) sum_freq += static_cast<double>(it->second) / runs;
        }
      }
      const double pairs = static_cast<double>(mem.size()) * (mem.size() - 1) / 2.0;
      needs_recluster = (sum_freq / pairs) < tau;
    }
    if (!needs_recluster) {
      for (int u : mem) labels[u] = next_label;
      ++next_label;
      continue;
    }
    // Louvain on the thresholded agreement subgraph of this component.
    std::vector<int> local_id(n, -1);
    for (std::size_t i = 0; i < mem.size(); ++i) local_id[mem[i]] = static_cast<int>(i);
    std::vector<Edge> sub_edges;
    for (int u : mem) {
      for (int v : agree[u]) {
        if (u < v && local_id[v] != -1) sub_edges.emplace_back(local_id[u], local_id[v]);
      }
    }
    std::sort(sub_edges.begin(), sub_edges.end());
    sub_edges.erase(std::unique(sub_edges.begin(), sub_edges.end()), sub_edges.end());
    if (sub_edges.empty()) {
      for (int u : mem) labels[u] = next_label++;
      continue;
    }
    Rng rng(seed_mix(seed, {0x20, static_cast<std::uint64_t>(c)}));
    const Partition sub = louvain(Graph::from_edges(static_cast<int>(mem.size()), sub_edges), rng);
    for (std::size_t i = 0; i < mem.size(); ++i) labels[mem[i]] = next_label + sub.labels[i];
    next_label += sub.k;
  }
  return Partition::from_labels(labels);
}

}  // namespace comconceal
