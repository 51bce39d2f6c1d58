#include "comconceal/lfr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "comconceal/errors.hpp"

namespace comconceal {

std::vector<int> sample_power_law(double exponent, int x_min, int x_max, int count, Rng& rng) {
  if (x_min < 1 || x_min > x_max) fail(Errc::EmptySupport, "support [" + std::to_string(x_min) + "," + std::to_string(x_max) + "]");
  std::vector<int> out;
  out.reserve(count);
  if (count <= 0) return out;
  const int span = x_max - x_min + 1;
  std::vector<double> cum(span);
  double total = 0.0;
  for (int i = 0; i < span; ++i) {
    total += std::pow(static_cast<double>(x_min + i), exponent);
    cum[i] = total;
  }
  for (int c = 0; c < count; ++c) {
    const double u = rng.uniform() * total;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    int idx = static_cast<int>(it - cum.begin());
    if (idx >= span) idx = span - 1;
    out.push_back(x_min + idx);
  }
  return out;
}

double power_law_mean(double exponent, int x_min, int x_max) {
  double num = 0.0, den = 0.0;
  for (int x = x_min; x <= x_max; ++x) {
    const double w = std::pow(static_cast<double>(x), exponent);
    num += x * w;
    den += w;
  }
  return num / den;
}

double empirical_mixing(const Graph& g, const Partition& p) {
  if (g.num_edges() == 0) fail(Errc::EmptyGraph, "empirical_mixing of edgeless graph");
  if (p.size() != g.num_nodes()) fail(Errc::DimensionMismatch, "partition does not cover graph");
  long cross = 0;
  for (const auto& [u, v] : g.edges()) {
    if (p.labels[u] != p.labels[v]) ++cross;
  }
  return static_cast<double>(cross) / static_cast<double>(g.num_edges());
}

namespace {

// Smallest x_min whose truncated power-law mean reaches `target`; the mean is
// increasing in x_min, so plain bisection over the integer support works.
int fit_degree_min(double exponent, int x_max, double target) {
  if (power_law_mean(exponent, 1, x_max) >= target) return 1;
  int lo = 1, hi = x_max;  // mean(lo) < target, mean(hi) >= target
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (power_law_mean(exponent, mid, x_max) >= target)
      hi = mid;
    else
      lo = mid;
  }
  const double below = power_law_mean(exponent, lo, x_max);
  const double above = power_law_mean(exponent, hi, x_max);
  return (target - below) <= (above - target) ? lo : hi;
}

std::vector<int> sample_community_sizes(const LfrParams& p, int s_max, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> sizes;
    long total = 0;
    while (total < p.n) {
      const int s = sample_power_law(p.beta, p.s_min, s_max, 1, rng)[0];
      sizes.push_back(s);
      total += s;
    }
    // Absorb the overshoot, never shrinking a community below s_min.
    long excess = total - p.n;
    for (auto it = sizes.rbegin(); it != sizes.rend() && excess > 0; ++it) {
      const long reducible = *it - p.s_min;
      const long take = std::min(reducible, excess);
      *it -= static_cast<int>(take);
      excess -= take;
    }
    if (excess == 0 && sizes.size() >= 2) return sizes;
  }
  fail(Errc::InfeasibleParams, "cannot realize >=2 community sizes summing to n");
}

int internal_need(double mu, int degree) {
  return static_cast<int>(std::ceil((1.0 - mu) * degree));
}

// Greedy placement in decreasing order of internal-degree requirement; each
// node picks uniformly among communities with free capacity that can host
// its internal degree.
std::vector<int> assign_communities(const std::vector<int>& degrees,
                                    const std::vector<int>& sizes, double mu, Rng& rng) {
  const int n = static_cast<int>(degrees.size());
  const int k = static_cast<int>(sizes.size());
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return internal_need(mu, degrees[a]) > internal_need(mu, degrees[b]);
    });
    std::vector<int> remaining(sizes.begin(), sizes.end());
    std::vector<int> labels(n, -1);
    bool ok = true;
    std::vector<int> feasible;
    for (int u : order) {
      feasible.clear();
      const int need = internal_need(mu, degrees[u]);
      for (int c = 0; c < k; ++c) {
        if (remaining[c] > 0 && need <= sizes[c] - 1) feasible.push_back(c);
      }
      if (feasible.empty()) {
        ok = false;
        break;
      }
      const int c = feasible[rng.below(feasible.size())];
      labels[u] = c;
      --remaining[c];
    }
    if (ok) return labels;
  }
  fail(Errc::InfeasibleParams, "community assignment failed: degree/size constraints too tight");
}

struct StubPair {
  int a, b;
};

// Configuration-model matching with swap repair: shuffle the stub list, pair
// consecutively, then repeatedly swap the second endpoint of invalid pairs
// with a random partner until all pairs are simple and new. Pairs that stay
// invalid are dropped.
std::vector<Edge> match_stubs(std::vector<int> stubs, Rng& rng,
                              const std::set<Edge>& existing,
                              const std::vector<int>* labels,  // non-null: endpoints must differ in label
                              long* dropped) {
  rng.shuffle(stubs);
  if (stubs.size() % 2 == 1) {
    stubs.pop_back();
    if (dropped) ++*dropped;
  }
  std::vector<StubPair> pairs;
  pairs.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) pairs.push_back({stubs[i], stubs[i + 1]});

  auto pair_ok = [&](const StubPair& pr, const std::set<Edge>& seen) {
    if (pr.a == pr.b) return false;
    if (labels && (*labels)[pr.a] == (*labels)[pr.b]) return false;
    const Edge e = make_edge(pr.a, pr.b);
    return !existing.count(e) && !seen.count(e);
  };

  const int max_passes = 200;
  for (int pass = 0; pass < max_passes && !pairs.empty(); ++pass) {
    std::set<Edge> seen;
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pair_ok(pairs[i], seen)) {
        seen.insert(make_edge(pairs[i].a, pairs[i].b));
      } else {
        bad.push_back(i);
      }
    }
    if (bad.empty()) break;
    if (pass == max_passes - 1) {
      // Give up on the irreparable remainder.
      std::sort(bad.rbegin(), bad.rend());
      for (std::size_t i : bad) {
        pairs.erase(pairs.begin() + i);
        if (dropped) *dropped += 2;
      }
      break;
    }
    for (std::size_t i : bad) {
      const std::size_t j = rng.below(pairs.size());
      std::swap(pairs[i].b, pairs[j].b);
    }
  }

  std::vector<Edge> out;
  out.reserve(pairs.size());
  for (const auto& pr : pairs) out.push_back(make_edge(pr.a, pr.b));
  return out;
}

}  // namespace

std::pair<Graph, Partition> generate_lfr(const LfrParams& p, std::uint64_t seed) {
  if (p.mu < 0.0 || p.mu >= 1.0) fail(Errc::InfeasibleParams, "mu must lie in [0,1)");
  if (p.k_max > p.n - 1) fail(Errc::InfeasibleParams, "k_max exceeds n-1");
  if (p.k_max < 1 || p.avg_degree < 1.0 || p.avg_degree > p.k_max)
    fail(Errc::InfeasibleParams, "avg_degree must lie in [1, k_max]");
  const int s_max = p.s_max > 0 ? p.s_max : std::max(p.k_max, p.s_min);
  if (p.s_min < 2 || p.s_min > s_max) fail(Errc::InfeasibleParams, "community size bounds");
  if (s_max < p.k_max)
    fail(Errc::InfeasibleParams, "s_max < k_max: a community cannot host its largest member");
  if (static_cast<long>(p.s_min) * 2 > p.n)
    fail(Errc::InfeasibleParams, "fewer than two communities fit");

  Rng degree_rng(seed_mix(seed, {1}));
  Rng size_rng(seed_mix(seed, {2}));
  Rng wire_rng(seed_mix(seed, {3}));

  // 1. Degrees.
  const int k_min = fit_degree_min(p.alpha, p.k_max, p.avg_degree);
  std::vector<int> degrees = sample_power_law(p.alpha, k_min, p.k_max, p.n, degree_rng);
  long deg_sum = std::accumulate(degrees.begin(), degrees.end(), 0L);
  if (deg_sum % 2 == 1) {
    for (int& d : degrees) {
      if (d < p.k_max) {
        ++d;
        ++deg_sum;
        break;
      }
    }
    if (deg_sum % 2 == 1) {
      --degrees.front();
      --deg_sum;
    }
  }

  // 2. Community sizes.
  const std::vector<int> sizes = sample_community_sizes(p, s_max, size_rng);
  const int k = static_cast<int>(sizes.size());

  const int worst_need = internal_need(p.mu, *std::max_element(degrees.begin(), degrees.end()));
  if (worst_need > s_max - 1)
    fail(Errc::InfeasibleParams, "max internal degree " + std::to_string(worst_need) +
                                     " does not fit in any community");

  // 3. Assignment.
  const std::vector<int> labels = assign_communities(degrees, sizes, p.mu, wire_rng);

  // 4. Internal/external stub targets. Internal degree is the nearest integer
  // to (1-mu) * degree, capped by the community size; per-community parity is
  // restored by moving one stub to the external pool.
  const int n = p.n;
  std::vector<int> internal(n), external(n);
  for (int u = 0; u < n; ++u) {
    int want = static_cast<int>(std::llround((1.0 - p.mu) * degrees[u]));
    want = std::min(want, sizes[labels[u]] - 1);
    want = std::max(want, 0);
    internal[u] = want;
    external[u] = degrees[u] - want;
  }
  std::vector<std::vector<int>> members(k);
  for (int u = 0; u < n; ++u) members[labels[u]].push_back(u);
  for (int c = 0; c < k; ++c) {
    long sum = 0;
    for (int u : members[c]) sum += internal[u];
    if (sum % 2 == 1) {
      int pick = -1;
      for (int u : members[c]) {
        if (internal[u] >= 1 && (pick == -1 || internal[u] > internal[pick])) pick = u;
      }
      --internal[pick];
      ++external[pick];
    }
  }
  {
    long ext_sum = 0;
    for (int u = 0; u < n; ++u) ext_sum += external[u];
    if (ext_sum % 2 == 1) {
      // Whole-graph degree sum is even and internal sums are even per
      // community, so this cannot happen; guard anyway.
      for (int u = 0; u < n; ++u) {
        if (external[u] > 0) {
          --external[u];
          break;
        }
      }
    }
  }

  // 5. Wiring.
  std::set<Edge> edge_set;
  long dropped = 0;
  for (int c = 0; c < k; ++c) {
    std::vector<int> stubs;
    for (int u : members[c]) stubs.insert(stubs.end(), internal[u], u);
    for (const Edge& e : match_stubs(std::move(stubs), wire_rng, edge_set, nullptr, &dropped))
      edge_set.insert(e);
  }
  {
    std::vector<int> stubs;
    for (int u = 0; u < n; ++u) stubs.insert(stubs.end(), external[u], u);
    for (const Edge& e : match_stubs(std::move(stubs), wire_rng, edge_set, &labels, &dropped))
      edge_set.insert(e);
  }

  // Repair isolated nodes left by dropped stubs.
  std::vector<int> cur_deg(n, 0);
  for (const auto& [u, v] : edge_set) {
    ++cur_deg[u];
    ++cur_deg[v];
  }
  for (int u = 0; u < n; ++u) {
    if (cur_deg[u] > 0) continue;
    for (int tries = 0; tries < 10 * n; ++tries) {
      const int v = static_cast<int>(wire_rng.below(n));
      if (v == u || cur_deg[v] >= p.k_max) continue;
      if (edge_set.insert(make_edge(u, v)).second) {
        ++cur_deg[u];
        ++cur_deg[v];
        break;
      }
    }
    if (cur_deg[u] == 0) fail(Errc::InfeasibleParams, "could not connect isolated node");
  }

  // 6. Drive the realized mixing into tolerance with degree-preserving
  // double-edge swaps.
  std::vector<Edge> edges(edge_set.begin(), edge_set.end());
  const long m = static_cast<long>(edges.size());
  if (m == 0) fail(Errc::InfeasibleParams, "empty edge set");
  long cross = 0;
  for (const auto& [u, v] : edges) {
    if (labels[u] != labels[v]) ++cross;
  }
  const long budget = p.max_rewire_iters >= 0 ? p.max_rewire_iters : 50 * m;
  long iters = 0;
  auto mixing = [&]() { return static_cast<double>(cross) / static_cast<double>(m); };
  while (std::abs(mixing() - p.mu) > p.mixing_tolerance) {
    if (iters++ >= budget)
      fail(Errc::RewireBudgetExceeded,
           "mixing " + std::to_string(mixing()) + " vs target " + std::to_string(p.mu));
    const std::size_t i = wire_rng.below(edges.size());
    const std::size_t j = wire_rng.below(edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c2, d2] = edges[j];
    const bool need_more_cross = mixing() < p.mu;
    if (need_more_cross) {
      if (labels[a] != labels[b] || labels[c2] != labels[d2]) continue;
      if (labels[a] == labels[c2]) continue;  // same community both sides
      if (wire_rng.below(2) == 1) std::swap(c2, d2);
      const Edge e1 = make_edge(a, c2), e2 = make_edge(b, d2);
      if (e1 == e2 || edge_set.count(e1) || edge_set.count(e2)) continue;
      edge_set.erase(edges[i]);
      edge_set.erase(edges[j]);
      edge_set.insert(e1);
      edge_set.insert(e2);
      edges[i] = e1;
      edges[j] = e2;
      cross += 2;
    } else {
      if (labels[a] == labels[b] || labels[c2] == labels[d2]) continue;
      // Orient so the first endpoints share a community, making one new edge
      // internal; the other new edge may stay cross.
      if (labels[a] == labels[d2] || labels[b] == labels[c2]) std::swap(c2, d2);
      if (labels[a] != labels[c2]) continue;
      if (a == c2 || b == d2) continue;
      const Edge e1 = make_edge(a, c2), e2 = make_edge(b, d2);
      if (e1 == e2 || edge_set.count(e1) || edge_set.count(e2)) continue;
      long new_cross = (labels[b] != labels[d2] ? 1 : 0);  // e1 is internal by construction
      edge_set.erase(edges[i]);
      edge_set.erase(edges[j]);
      edge_set.insert(e1);
      edge_set.insert(e2);
      edges[i] = e1;
      edges[j] = e2;
      cross += new_cross - 2;
    }
  }

  Graph g = Graph::from_edges(n, std::move(edges));
  Partition part = Partition::from_labels(labels);
  if (part.k < 2) fail(Errc::InfeasibleParams, "generated fewer than two communities");
  return {std::move(g), std::move(part)};
}

NodeFeatures generate_features(const Partition& p, const FeatureGenParams& fp, std::uint64_t seed) {
  if (p.k < 1) fail(Errc::EmptyCommunity, "partition has no communities");
  if (fp.dim < 1 || fp.sigma_c <= 0.0 || fp.sigma <= 0.0)
    fail(Errc::InfeasibleParams, "feature params require d >= 1 and positive spreads");
  Rng rng(seed_mix(seed, {4}));
  Mat centroids(p.k, fp.dim);
  for (int c = 0; c < p.k; ++c) {
    for (int j = 0; j < fp.dim; ++j) centroids.at(c, j) = fp.sigma_c * rng.normal();
  }
  NodeFeatures x(p.size(), fp.dim);
  for (int u = 0; u < p.size(); ++u) {
    const double* mu_row = centroids.row(p.labels[u]);
    double* row = x.row(u);
    for (int j = 0; j < fp.dim; ++j) row[j] = mu_row[j] + fp.sigma * rng.normal();
  }
  return x;
}

}  // namespace comconceal
