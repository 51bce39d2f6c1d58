#include "comconceal/centrality.hpp"

#include <queue>
#include <vector>

namespace comconceal {

namespace {

// Single-source shortest-path counting and dependency accumulation.
void brandes_from_source(const Graph& g, int s, std::vector<double>& acc,
                         std::vector<long>& sigma, std::vector<int>& dist,
                         std::vector<double>& delta, std::vector<int>& order) {
  const int n = g.num_nodes();
  sigma.assign(n, 0);
  dist.assign(n, -1);
  delta.assign(n, 0.0);
  order.clear();

  sigma[s] = 1;
  dist[s] = 0;
  std::queue<int> q;
  q.push(s);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    order.push_back(u);
    for (int v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
      if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int w = *it;
    for (int v : g.neighbors(w)) {
      if (dist[v] == dist[w] - 1 && sigma[w] > 0) {
        delta[v] += (static_cast<double>(sigma[v]) / sigma[w]) * (1.0 + delta[w]);
      }
    }
    if (w != s) acc[w] += delta[w];
  }
}

}  // namespace

std::vector<double> betweenness_centrality(const Graph& g) {
  const int n = g.num_nodes();
  constexpr int kChunk = 64;
  const int nchunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(nchunks);

#pragma omp parallel for schedule(dynamic) if (n > 256)
  for (int c = 0; c < nchunks; ++c) {
    std::vector<double> acc(n, 0.0);
    std::vector<long> sigma;
    std::vector<int> dist;
    std::vector<double> delta;
    std::vector<int> order;
    const int lo = c * kChunk;
    const int hi = std::min(n, lo + kChunk);
    for (int s = lo; s < hi; ++s) brandes_from_source(g, s, acc, sigma, dist, delta, order);
    partial[c] = std::move(acc);
  }

  std::vector<double> bc(n, 0.0);
  for (int c = 0; c < nchunks; ++c) {
    for (int u = 0; u < n; ++u) bc[u] += partial[c][u];
  }
  // Each unordered pair was counted from both endpoints.
  for (double& v : bc) v *= 0.5;
  return bc;
}

std::vector<double> closeness_centrality(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> clos(n, 0.0);
  if (n <= 1) return clos;

#pragma omp parallel for schedule(dynamic) if (n > 256)
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    long reach = 0;
    long total = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      ++reach;
      total += dist[u];
      for (int v : g.neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
      }
    }
    if (reach > 1 && total > 0) {
      const double r1 = static_cast<double>(reach - 1);
      clos[s] = (r1 / (n - 1)) * (r1 / static_cast<double>(total));
    }
  }
  return clos;
}

}  // namespace comconceal
