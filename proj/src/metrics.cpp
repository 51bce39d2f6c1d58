#include "comconceal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "comconceal/centrality.hpp"
#include "comconceal/errors.hpp"

namespace comconceal {

ModularityContext::ModularityContext(const Graph& g)
    : graph(&g), m(g.num_edges()), degrees(g.degrees()) {
  if (m < 1) fail(Errc::EmptyGraph, "modularity of edgeless graph");
}

double ModularityContext::b_entry(int i, int j) const {
  const double null_term =
      static_cast<double>(degrees[i]) * degrees[j] / (2.0 * static_cast<double>(m));
  return (graph->has_edge(i, j) ? 1.0 : 0.0) - null_term;
}

Mat ModularityContext::dense_b() const {
  const int n = graph->num_nodes();
  Mat b(n, n);
  const double inv2m = 1.0 / (2.0 * static_cast<double>(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      b.at(i, j) = -static_cast<double>(degrees[i]) * degrees[j] * inv2m;
  }
  for (const auto& [u, v] : graph->edges()) {
    b.at(u, v) += 1.0;
    b.at(v, u) += 1.0;
  }
  return b;
}

double modularity(const Graph& g, const Partition& p) {
  if (g.num_edges() < 1) fail(Errc::EmptyGraph, "modularity of edgeless graph");
  if (p.size() != g.num_nodes()) fail(Errc::DimensionMismatch, "partition does not cover graph");
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  std::vector<long> intra(p.k, 0);
  std::vector<double> comm_deg(p.k, 0.0);
  for (const auto& [u, v] : g.edges()) {
    if (p.labels[u] == p.labels[v]) ++intra[p.labels[u]];
  }
  for (int u = 0; u < g.num_nodes(); ++u) comm_deg[p.labels[u]] += g.degree(u);
  double q = 0.0;
  for (int c = 0; c < p.k; ++c) {
    q += 2.0 * intra[c] / two_m - (comm_deg[c] / two_m) * (comm_deg[c] / two_m);
  }
  return q;
}

Mat membership_matrix(const Partition& p) {
  Mat c(p.size(), p.k);
  for (int u = 0; u < p.size(); ++u) c.at(u, p.labels[u]) = 1.0;
  return c;
}

double spectral_modularity(const Graph& g, const Mat& c) {
  if (g.num_edges() < 1) fail(Errc::EmptyGraph, "modularity of edgeless graph");
  if (c.rows != g.num_nodes()) fail(Errc::DimensionMismatch, "membership rows != n");
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  // Tr(C^T A C) over the zero-diagonal adjacency.
  double tr_adj = 0.0;
  for (const auto& [u, v] : g.edges()) {
    const double* cu = c.row(u);
    const double* cv = c.row(v);
    double dot = 0.0;
    for (int j = 0; j < c.cols; ++j) dot += cu[j] * cv[j];
    tr_adj += 2.0 * dot;
  }
  // Tr(C^T k k^T C) = ||k^T C||^2.
  std::vector<double> kc(c.cols, 0.0);
  for (int u = 0; u < c.rows; ++u) {
    const double deg = g.degree(u);
    const double* cu = c.row(u);
    for (int j = 0; j < c.cols; ++j) kc[j] += deg * cu[j];
  }
  double ktc_sq = 0.0;
  for (double v : kc) ktc_sq += v * v;
  return (tr_adj - ktc_sq / two_m) / two_m;
}

double m1_score(const std::vector<int>& target, const Partition& detected) {
  if (target.empty()) fail(Errc::EmptyTarget, "m1 of empty target");
  std::vector<long> overlap(detected.k, 0);
  for (int u : target) {
    if (u < 0 || u >= detected.size()) fail(Errc::TargetOutOfRange, "node " + std::to_string(u));
    ++overlap[detected.labels[u]];
  }
  long touched = 0;
  long max_overlap = 0;
  for (long o : overlap) {
    if (o > 0) ++touched;
    max_overlap = std::max(max_overlap, o);
  }
  const double denom =
      static_cast<double>(std::max<long>(detected.k - 1, 1)) * static_cast<double>(max_overlap);
  return static_cast<double>(touched - 1) / denom;
}

double m2_score(const std::vector<int>& target, const Partition& detected, int n) {
  if (target.empty()) fail(Errc::EmptyTarget, "m2 of empty target");
  std::vector<char> in_target(detected.size(), 0);
  for (int u : target) {
    if (u < 0 || u >= n || u >= detected.size())
      fail(Errc::TargetOutOfRange, "node " + std::to_string(u));
    in_target[u] = 1;
  }
  std::vector<char> touches(detected.k, 0);
  for (int u : target) touches[detected.labels[u]] = 1;
  long outside = 0;
  for (int u = 0; u < detected.size(); ++u) {
    if (!in_target[u] && touches[detected.labels[u]]) ++outside;
  }
  const double denom = static_cast<double>(std::max<long>(n - static_cast<long>(target.size()), 1));
  return static_cast<double>(outside) / denom;
}

double element_centric_similarity(const Partition& a, const Partition& b,
                                  const EcsParams& params) {
  if (a.size() != b.size()) fail(Errc::SizeMismatch, "partitions cover different node sets");
  const int n = a.size();
  if (n == 0) fail(Errc::SizeMismatch, "empty partitions");
  if (params.alpha <= 0.0 || params.alpha >= 1.0)
    fail(Errc::ConfigError, "ecs alpha must lie in (0,1)");
  const double alpha = params.alpha;

  std::vector<long> size_a(a.k, 0), size_b(b.k, 0);
  for (int u = 0; u < n; ++u) {
    ++size_a[a.labels[u]];
    ++size_b[b.labels[u]];
  }
  // Node u's affinity vector puts alpha/|c(u)| on every member of its cluster
  // plus (1 - alpha) extra on itself. The L1 distance between u's vectors
  // under the two partitions only involves u's two clusters; it is
  // accumulated from the overlap of those clusters.
  std::vector<std::vector<int>> comm_a = a.communities();
  double total = 0.0;
  for (int u = 0; u < n; ++u) {
    const double pa = alpha / static_cast<double>(size_a[a.labels[u]]);
    const double pb = alpha / static_cast<double>(size_b[b.labels[u]]);
    long overlap = 0;  // members of u's cluster in `a` that share u's cluster in `b`
    for (int v : comm_a[a.labels[u]]) {
      if (b.labels[v] == b.labels[u]) ++overlap;
    }
    // Both vectors add the same (1 - alpha) on u itself, which cancels.
    double l1 = 0.0;
    l1 += std::abs(pa - pb) * static_cast<double>(overlap);
    l1 += pa * static_cast<double>(size_a[a.labels[u]] - overlap);
    l1 += pb * static_cast<double>(size_b[b.labels[u]] - overlap);
    total += 1.0 - l1 / (2.0 * alpha);
  }
  return total / static_cast<double>(n);
}

double centroid_sq_distance(int target_id, const Partition& p, const NodeFeatures& x) {
  if (p.k < 2) fail(Errc::SingleCommunity, "centroid distance needs k >= 2");
  if (target_id < 0 || target_id >= p.k) fail(Errc::TargetMissing, "community " + std::to_string(target_id));
  x.validate_for(p.size());
  const int d = x.dim();
  Mat centroids(p.k, d);
  std::vector<long> counts(p.k, 0);
  for (int u = 0; u < p.size(); ++u) {
    const int c = p.labels[u];
    ++counts[c];
    const double* row = x.row(u);
    for (int j = 0; j < d; ++j) centroids.at(c, j) += row[j];
  }
  for (int c = 0; c < p.k; ++c) {
    if (counts[c] == 0) fail(Errc::EmptyCommunity, "community " + std::to_string(c));
    for (int j = 0; j < d; ++j) centroids.at(c, j) /= static_cast<double>(counts[c]);
  }
  double sum = 0.0;
  for (int c = 0; c < p.k; ++c) {
    if (c == target_id) continue;
    double sq = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = centroids.at(target_id, j) - centroids.at(c, j);
      sq += diff * diff;
    }
    sum += sq;
  }
  return sum / static_cast<double>(p.k - 1);
}

DescriptorRecord community_descriptors(const Graph& g, const Partition& p,
                                       const NodeFeatures& x, int target_id) {
  if (target_id < 0 || target_id >= p.k)
    fail(Errc::TargetMissing, "community " + std::to_string(target_id));
  if (p.size() != g.num_nodes()) fail(Errc::DimensionMismatch, "partition does not cover graph");

  DescriptorRecord rec;
  std::vector<int> members;
  for (int u = 0; u < p.size(); ++u) {
    if (p.labels[u] == target_id) members.push_back(u);
  }
  rec.community_size = static_cast<long>(members.size());

  long intra = 0, inter = 0;
  for (const auto& [u, v] : g.edges()) {
    const bool tu = p.labels[u] == target_id;
    const bool tv = p.labels[v] == target_id;
    if (tu && tv)
      ++intra;
    else if (tu || tv)
      ++inter;
  }
  rec.community_degree = static_cast<double>(inter);
  if (intra > 0) {
    rec.inter_intra_ratio = static_cast<double>(inter) / static_cast<double>(intra);
  } else {
    rec.inter_intra_defined = false;
    rec.inter_intra_ratio = 0.0;
  }

  double deg_sum = 0.0;
  for (int u : members) deg_sum += g.degree(u);
  rec.mean_degree = deg_sum / static_cast<double>(members.size());

  const std::vector<double> bc = betweenness_centrality(g);
  const std::vector<double> cl = closeness_centrality(g);
  double bc_sum = 0.0, cl_sum = 0.0;
  for (int u : members) {
    bc_sum += bc[u];
    cl_sum += cl[u];
  }
  rec.mean_betweenness = bc_sum / static_cast<double>(members.size());
  rec.mean_closeness = cl_sum / static_cast<double>(members.size());

  const Graph q = quotient_graph(g, p);
  const std::vector<double> qbc = betweenness_centrality(q);
  const std::vector<double> qcl = closeness_centrality(q);
  rec.community_betweenness = qbc[target_id];
  rec.community_closeness = qcl[target_id];

  if (x.rows() > 0 && p.k >= 2) {
    rec.avg_centroid_sq_distance = centroid_sq_distance(target_id, p, x);
  }
  return rec;
}

}  // namespace comconceal
