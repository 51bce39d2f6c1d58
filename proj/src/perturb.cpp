#include "comconceal/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "comconceal/errors.hpp"

namespace comconceal {

Budget budget_from_fraction(double beta_b, long e_intra, double p) {
  if (e_intra < 0) fail(Errc::ConfigError, "negative intra-edge count");
  Budget out;
  out.b = static_cast<long>(std::floor(beta_b * static_cast<double>(e_intra)));
  out.b_del = static_cast<long>(std::floor(static_cast<double>(out.b) * p));
  out.b_add = out.b - out.b_del;
  return out;
}

namespace {

void check_spec(const PerturbSpec& spec, int n) {
  if (spec.target.empty()) fail(Errc::EmptyTarget, "empty target community");
  for (int u : spec.target) {
    if (u < 0 || u >= n) fail(Errc::TargetOutOfRange, "node " + std::to_string(u));
  }
  if (spec.beta_b < 0.0 || spec.beta_b > 1.0 || spec.p < 0.0 || spec.p > 1.0)
    fail(Errc::ConfigError, "beta_b and p must lie in [0,1]");
}

// k-of-n sample without replacement via partial Fisher-Yates.
template <class T>
std::vector<T> sample_without_replacement(std::vector<T> pool, long k, Rng& rng) {
  const long n = static_cast<long>(pool.size());
  k = std::min(k, n);
  for (long i = 0; i < k; ++i) {
    const long j = i + static_cast<long>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

struct EditState {
  std::set<Edge> edges;  // current edge set E'
  std::vector<char> in_target;
};

Graph assemble(const EditState& st, int n) {
  return Graph::from_edges(n, std::vector<Edge>(st.edges.begin(), st.edges.end()));
}

// Deletion step shared by both methods.
void delete_intra(const Graph& g, const std::vector<int>& target, long b_del,
                  PerturbationResult& res, EditState& st, Rng& rng) {
  const std::vector<Edge> intra = intra_edges(g, target);
  if (b_del > static_cast<long>(intra.size())) res.exhausted_deletion = true;
  res.deleted = sample_without_replacement(intra, b_del, rng);
  std::sort(res.deleted.begin(), res.deleted.end());
  for (const Edge& e : res.deleted) st.edges.erase(e);
}

}  // namespace

CentroidIndex community_centroids(const NodeFeatures& x, const Partition& p) {
  x.validate_for(p.size());
  const int d = x.dim();
  CentroidIndex out;
  out.centroids = Mat(p.k, d);
  std::vector<long> counts(p.k, 0);
  for (int u = 0; u < p.size(); ++u) {
    const int c = p.labels[u];
    ++counts[c];
    const double* row = x.row(u);
    for (int j = 0; j < d; ++j) out.centroids.at(c, j) += row[j];
  }
  for (int c = 0; c < p.k; ++c) {
    if (counts[c] == 0) fail(Errc::EmptyCommunity, "community " + std::to_string(c));
    for (int j = 0; j < d; ++j) out.centroids.at(c, j) /= static_cast<double>(counts[c]);
  }
  out.s_nc = Mat(p.size(), p.k);
  for (int u = 0; u < p.size(); ++u) {
    const double* row = x.row(u);
    for (int c = 0; c < p.k; ++c) {
      const double* cen = out.centroids.row(c);
      double sq = 0.0;
      for (int j = 0; j < d; ++j) {
        const double diff = row[j] - cen[j];
        sq += diff * diff;
      }
      out.s_nc.at(u, c) = -sq;
    }
  }
  return out;
}

PerturbationResult dice(const Graph& g, const PerturbSpec& spec, Rng& rng) {
  check_spec(spec, g.num_nodes());
  const int n = g.num_nodes();

  std::vector<int> target = spec.target;
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());

  PerturbationResult res;
  EditState st;
  st.edges.insert(g.edges().begin(), g.edges().end());
  st.in_target.assign(n, 0);
  for (int u : target) st.in_target[u] = 1;

  const std::vector<Edge> intra = intra_edges(g, target);
  const Budget budget = budget_from_fraction(spec.beta_b, static_cast<long>(intra.size()), spec.p);

  delete_intra(g, target, budget.b_del, res, st, rng);

  // Candidate cross pairs absent from the ORIGINAL graph.
  long cross_existing = 0;
  for (const auto& [u, v] : g.edges()) {
    if (st.in_target[u] != st.in_target[v]) ++cross_existing;
  }
  const long n_ext = n - static_cast<long>(target.size());
  const long cand_total = static_cast<long>(target.size()) * n_ext - cross_existing;
  const long to_add = std::min(budget.b_add, cand_total);
  if (budget.b_add > cand_total) res.exhausted_addition = true;

  if (to_add > 0) {
    std::set<Edge> added;
    if (3 * to_add < cand_total) {
      // Rejection sampling is cheap while the candidate pool stays large.
      std::vector<int> ext_nodes;
      ext_nodes.reserve(n_ext);
      for (int u = 0; u < n; ++u) {
        if (!st.in_target[u]) ext_nodes.push_back(u);
      }
      while (static_cast<long>(added.size()) < to_add) {
        const int u = target[rng.below(target.size())];
        const int v = ext_nodes[rng.below(ext_nodes.size())];
        const Edge e = make_edge(u, v);
        if (g.has_edge(u, v) || added.count(e)) continue;
        added.insert(e);
      }
    } else {
      std::vector<Edge> cand;
      cand.reserve(cand_total);
      for (int u : target) {
        for (int v = 0; v < n; ++v) {
          if (!st.in_target[v] && !g.has_edge(u, v)) cand.push_back(make_edge(u, v));
        }
      }
      std::sort(cand.begin(), cand.end());
      for (const Edge& e : sample_without_replacement(cand, to_add, rng)) added.insert(e);
    }
    res.added.assign(added.begin(), added.end());
    for (const Edge& e : res.added) st.edges.insert(e);
  }

  res.graph = assemble(st, n);
  return res;
}

PerturbationResult fcom_dice(const Graph& g, const NodeFeatures& x, const Partition& p,
                             const PerturbSpec& spec, Rng& rng) {
  check_spec(spec, g.num_nodes());
  if (p.size() != g.num_nodes()) fail(Errc::DimensionMismatch, "partition does not cover graph");
  x.validate_for(g.num_nodes());

  // The target must be exactly one community of p.
  const int target_label = p.labels[spec.target.front()];
  long label_count = 0;
  for (int lbl : p.labels) {
    if (lbl == target_label) ++label_count;
  }
  std::set<int> target_set(spec.target.begin(), spec.target.end());
  if (static_cast<long>(target_set.size()) != label_count ||
      static_cast<long>(target_set.size()) != static_cast<long>(spec.target.size()))
    fail(Errc::TargetNotACommunity, "target differs from community " + std::to_string(target_label));
  for (int u : spec.target) {
    if (p.labels[u] != target_label)
      fail(Errc::TargetNotACommunity, "node " + std::to_string(u) + " outside community");
  }

  // Centroids and S_nc are frozen from the input features for the whole run.
  const CentroidIndex index = community_centroids(x, p);
  const auto communities = p.communities();

  const int n = g.num_nodes();
  PerturbationResult res;
  EditState st;
  st.edges.insert(g.edges().begin(), g.edges().end());
  st.in_target.assign(n, 0);
  for (int u : spec.target) st.in_target[u] = 1;

  const std::vector<Edge> intra = intra_edges(g, spec.target);
  const Budget budget = budget_from_fraction(spec.beta_b, static_cast<long>(intra.size()), spec.p);

  delete_intra(g, spec.target, budget.b_del, res, st, rng);

  NodeFeatures features = x;

  // Adjacency of target nodes against the current edge set; additions only
  // ever touch target-incident pairs, so membership checks can use the
  // running set directly.
  auto has_current_edge = [&](int u, int v) { return st.edges.count(make_edge(u, v)) > 0; };

  long added = 0;
  long consecutive_skips = 0;
  const long skip_limit = 10 * static_cast<long>(spec.target.size());
  std::vector<int> nonneighbors;
  while (added < budget.b_add) {
    if (consecutive_skips >= skip_limit) {
      res.exhausted_addition = true;
      break;
    }
    const int u = spec.target[rng.below(spec.target.size())];

    // Feasible destination communities: some member is still a non-neighbor.
    int best = -1;
    for (int c = 0; c < p.k; ++c) {
      if (c == target_label) continue;
      bool feasible = false;
      for (int v : communities[c]) {
        if (!has_current_edge(u, v)) {
          feasible = true;
          break;
        }
      }
      if (!feasible) continue;
      if (best == -1 || index.s_nc.at(u, c) > index.s_nc.at(u, best)) best = c;
      // Ties resolve to the smallest community id via strict '>' above.
    }
    if (best == -1) {
      ++consecutive_skips;
      continue;
    }
    consecutive_skips = 0;

    nonneighbors.clear();
    for (int v : communities[best]) {
      if (!has_current_edge(u, v)) nonneighbors.push_back(v);
    }
    const int v = nonneighbors[rng.below(nonneighbors.size())];
    const Edge e = make_edge(u, v);
    st.edges.insert(e);
    res.added.push_back(e);
    res.feature_edits.emplace_back(u, best);
    const double* cen = index.centroids.row(best);
    double* row = features.row(u);
    for (int j = 0; j < x.dim(); ++j) row[j] = cen[j];
    ++added;
  }
  std::sort(res.added.begin(), res.added.end());

  res.features = std::move(features);
  res.graph = assemble(st, n);
  return res;
}

}  // namespace comconceal
