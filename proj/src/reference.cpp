#include "comconceal/reference.hpp"

#include <cmath>

#include "comconceal/errors.hpp"

namespace comconceal::reference {

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) fail(Errc::DimensionMismatch, "reference matmul");
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
      c.at(i, j) = acc;
    }
  }
  return c;
}

Mat dense_from_csr(const CsrMatrix& s) {
  Mat d(s.n, s.n);
  for (int i = 0; i < s.n; ++i) {
    for (int p = s.indptr[i]; p < s.indptr[i + 1]; ++p) d.at(i, s.indices[p]) = s.values[p];
  }
  return d;
}

std::vector<double> betweenness(const Graph& g) {
  const int n = g.num_nodes();
  // All-pairs BFS distances and path counts.
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  std::vector<std::vector<double>> paths(n, std::vector<double>(n, 0.0));
  for (int s = 0; s < n; ++s) {
    dist[s][s] = 0;
    paths[s][s] = 1.0;
    std::vector<int> frontier = {s};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int u : frontier) {
        for (int v : g.neighbors(u)) {
          if (dist[s][v] == -1) {
            dist[s][v] = dist[s][u] + 1;
            next.push_back(v);
          }
          if (dist[s][v] == dist[s][u] + 1) paths[s][v] += paths[s][u];
        }
      }
      // Deduplicate: a node may be appended several times in one wave.
      std::vector<int> uniq;
      for (int v : next) {
        bool seen = false;
        for (int w : uniq) {
          if (w == v) seen = true;
        }
        if (!seen) uniq.push_back(v);
      }
      frontier = std::move(uniq);
    }
  }

  std::vector<double> bc(n, 0.0);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      if (dist[s][t] <= 0) continue;
      for (int v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        if (dist[s][v] >= 0 && dist[v][t] >= 0 && dist[s][v] + dist[v][t] == dist[s][t]) {
          bc[v] += paths[s][v] * paths[v][t] / paths[s][t];
        }
      }
    }
  }
  return bc;
}

double modularity_double_sum(const Graph& g, const Partition& p) {
  if (g.num_edges() < 1) fail(Errc::EmptyGraph, "modularity of edgeless graph");
  const int n = g.num_nodes();
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (p.labels[i] != p.labels[j]) continue;
      const double a_ij = g.has_edge(i, j) ? 1.0 : 0.0;
      q += a_ij - static_cast<double>(g.degree(i)) * g.degree(j) / two_m;
    }
  }
  return q / two_m;
}

namespace {

void softmax_rows(Mat& m) {
  for (int i = 0; i < m.rows; ++i) {
    double* row = m.row(i);
    double mx = row[0];
    for (int j = 1; j < m.cols; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (int j = 0; j < m.cols; ++j) {
      row[j] = std::exp(row[j] - mx);
      sum += row[j];
    }
    for (int j = 0; j < m.cols; ++j) row[j] /= sum;
  }
}

}  // namespace

Mat dmon_forward_dense(const DmonParams& params, const NormalizedAdjacency& a,
                       const NodeFeatures& x) {
  const Mat a_dense = dense_from_csr(a.a_hat);
  Mat h = x.values;
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    Mat z = reference::matmul(reference::matmul(a_dense, h), params.w[l]);
    const Mat skip = reference::matmul(x.values, params.w_skip[l]);
    for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] += skip.data[i];
    for (double& v : z.data) v = selu(v);
    h = std::move(z);
  }
  Mat logits = reference::matmul(h, params.w_out);
  softmax_rows(logits);
  return logits;
}

}  // namespace comconceal::reference
