#include "comconceal/dmon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "comconceal/errors.hpp"

namespace comconceal {

double selu(double v) {
  return v > 0.0 ? kSeluLambda * v : kSeluLambda * kSeluAlpha * (std::exp(v) - 1.0);
}

std::vector<double> selu(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = selu(v[i]);
  return out;
}

namespace {

double selu_grad(double v) {
  return v > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(v);
}

void selu_inplace(Mat& m) {
  for (double& v : m.data) v = selu(v);
}

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

Mat features_mat(const NodeFeatures& x) {
  return x.values;
}

struct ForwardCache {
  std::vector<Mat> msg;  // A_hat * H_l per layer
  std::vector<Mat> z;    // pre-activations per layer
  std::vector<Mat> h;    // activations; h[0] is unused (input is X)
  Mat logits;            // before dropout
  Mat c;                 // soft assignment
};

void check_dims(const DmonParams& p, int d, int k) {
  if (p.w.size() != p.w_skip.size() || p.w.empty())
    fail(Errc::DimensionMismatch, "encoder layer lists disagree");
  int cur = d;
  for (std::size_t l = 0; l < p.w.size(); ++l) {
    if (p.w[l].rows != cur) fail(Errc::DimensionMismatch, "w[" + std::to_string(l) + "] rows");
    if (p.w_skip[l].rows != d || p.w_skip[l].cols != p.w[l].cols)
      fail(Errc::DimensionMismatch, "w_skip[" + std::to_string(l) + "] shape");
    cur = p.w[l].cols;
  }
  if (p.w_out.rows != cur || p.w_out.cols != k)
    fail(Errc::DimensionMismatch, "w_out shape");
}

ForwardCache run_forward(const DmonParams& params, const NormalizedAdjacency& a,
                         const Mat& x, const DropoutMask* mask) {
  ForwardCache fc;
  const std::size_t layers = params.w.size();
  fc.msg.resize(layers);
  fc.z.resize(layers);
  fc.h.resize(layers + 1);
  const Mat* cur = &x;
  for (std::size_t l = 0; l < layers; ++l) {
    fc.msg[l] = spmm(a.a_hat, *cur);
    fc.z[l] = matmul(fc.msg[l], params.w[l]);
    add_inplace(fc.z[l], matmul(x, params.w_skip[l]));
    fc.h[l + 1] = fc.z[l];
    selu_inplace(fc.h[l + 1]);
    cur = &fc.h[l + 1];
  }
  fc.logits = matmul(*cur, params.w_out);
  fc.c = fc.logits;
  if (mask && mask->enabled) {
    const double scale = 1.0 / (1.0 - mask->rate);
    for (std::size_t i = 0; i < fc.c.data.size(); ++i)
      fc.c.data[i] = mask->keep[i] ? fc.c.data[i] * scale : 0.0;
  }
  softmax_rows(fc.c);
  return fc;
}

// Gradient of the DMoN loss with respect to the soft assignment C.
Mat loss_grad_wrt_c(const Mat& c, const Graph& g) {
  const int n = c.rows;
  const int k = c.cols;
  const double two_m = 2.0 * static_cast<double>(g.num_edges());

  // Modularity part: -(1/m) * B * C with B = A - deg deg^T / 2m, using the
  // sparse adjacency.
  Mat grad(n, k);
  for (const auto& [u, v] : g.edges()) {
    const double* cu = c.row(u);
    const double* cv = c.row(v);
    double* gu = grad.row(u);
    double* gv = grad.row(v);
    for (int j = 0; j < k; ++j) {
      gu[j] += cv[j];
      gv[j] += cu[j];
    }
  }
  std::vector<double> ktc(k, 0.0);
  for (int u = 0; u < n; ++u) {
    const double deg = g.degree(u);
    const double* cu = c.row(u);
    for (int j = 0; j < k; ++j) ktc[j] += deg * cu[j];
  }
  const double inv_m = 1.0 / static_cast<double>(g.num_edges());
  for (int u = 0; u < n; ++u) {
    const double deg = g.degree(u);
    double* gu = grad.row(u);
    for (int j = 0; j < k; ++j) {
      gu[j] = -inv_m * (gu[j] - deg * ktc[j] / two_m);
    }
  }

  // Collapse part: (sqrt(k)/n) * colsum / ||colsum|| added to every row.
  std::vector<double> colsum(k, 0.0);
  for (int u = 0; u < n; ++u) {
    const double* cu = c.row(u);
    for (int j = 0; j < k; ++j) colsum[j] += cu[j];
  }
  double norm = 0.0;
  for (double v : colsum) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    const double scale = std::sqrt(static_cast<double>(k)) / static_cast<double>(n) / norm;
    for (int u = 0; u < n; ++u) {
      double* gu = grad.row(u);
      for (int j = 0; j < k; ++j) gu[j] += scale * colsum[j];
    }
  }
  return grad;
}

DmonParams run_backward(const DmonParams& params, const NormalizedAdjacency& a,
                        const Mat& x, const Graph& g, const DropoutMask* mask,
                        const ForwardCache& fc) {
  const std::size_t layers = params.w.size();

  Mat g_c = loss_grad_wrt_c(fc.c, g);

  // Softmax rows: dz_j = c_j * (g_j - sum_l g_l c_l).
  Mat d_logits(g_c.rows, g_c.cols);
  for (int i = 0; i < g_c.rows; ++i) {
    const double* crow = fc.c.row(i);
    const double* grow = g_c.row(i);
    double dot = 0.0;
    for (int j = 0; j < g_c.cols; ++j) dot += grow[j] * crow[j];
    double* drow = d_logits.row(i);
    for (int j = 0; j < g_c.cols; ++j) drow[j] = crow[j] * (grow[j] - dot);
  }
  if (mask && mask->enabled) {
    const double scale = 1.0 / (1.0 - mask->rate);
    for (std::size_t i = 0; i < d_logits.data.size(); ++i)
      d_logits.data[i] = mask->keep[i] ? d_logits.data[i] * scale : 0.0;
  }

  DmonParams grads;
  grads.w.resize(layers);
  grads.w_skip.resize(layers);

  const Mat& h_last = layers > 0 ? fc.h[layers] : x;
  grads.w_out = matmul_tn(h_last, d_logits);
  Mat d_h = matmul_nt(d_logits, params.w_out);

  for (std::size_t l = layers; l-- > 0;) {
    Mat d_z = std::move(d_h);
    for (std::size_t i = 0; i < d_z.data.size(); ++i)
      d_z.data[i] *= selu_grad(fc.z[l].data[i]);
    grads.w[l] = matmul_tn(fc.msg[l], d_z);
    grads.w_skip[l] = matmul_tn(x, d_z);
    if (l > 0) {
      // d/dH_l of (A_hat H_l W_l): A_hat^T dZ W_l^T; A_hat is symmetric.
      d_h = spmm(a.a_hat, matmul_nt(d_z, params.w[l]));
    }
  }
  return grads;
}

}  // namespace

NormalizedAdjacency normalized_adjacency(const Graph& g) {
  const int n = g.num_nodes();
  NormalizedAdjacency out;
  out.n = n;
  out.a_hat.n = n;
  out.a_hat.indptr.assign(n + 1, 0);
  for (int u = 0; u < n; ++u) out.a_hat.indptr[u + 1] = out.a_hat.indptr[u] + g.degree(u);
  out.a_hat.indices.resize(out.a_hat.indptr[n]);
  out.a_hat.values.resize(out.a_hat.indptr[n]);
  for (int u = 0; u < n; ++u) {
    int pos = out.a_hat.indptr[u];
    for (int v : g.neighbors(u)) {
      out.a_hat.indices[pos] = v;
      out.a_hat.values[pos] =
          1.0 / std::sqrt(static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v)));
      ++pos;
    }
  }
  return out;
}

DropoutMask make_dropout_mask(int n, int k, double rate, Rng& rng) {
  DropoutMask mask;
  mask.enabled = true;
  mask.rate = rate;
  mask.keep.resize(static_cast<std::size_t>(n) * k);
  for (auto& b : mask.keep) b = rng.uniform() >= rate ? 1 : 0;
  return mask;
}

NodeFeatures standardize_features(const NodeFeatures& x) {
  NodeFeatures out = x;
  const int n = x.rows();
  if (n == 0) return out;
  for (int j = 0; j < x.dim(); ++j) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += x.row(i)[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = x.row(i)[j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (int i = 0; i < n; ++i) out.row(i)[j] = (x.row(i)[j] - mean) * scale;
  }
  return out;
}

DmonParams dmon_init(int input_dim, const DmonHyper& hyper, Rng& rng) {
  if (hyper.k < 2) fail(Errc::ConfigError, "k >= 2 required");
  DmonParams p;
  auto init_mat = [&](int rows, int cols) {
    Mat m(rows, cols);
    const double s = hyper.init_scale > 0.0
                         ? hyper.init_scale
                         : std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : m.data) v = rng.uniform(-s, s);
    return m;
  };
  int cur = input_dim;
  for (int width : hyper.hidden_dims) {
    p.w.push_back(init_mat(cur, width));
    p.w_skip.push_back(init_mat(input_dim, width));
    cur = width;
  }
  p.w_out = init_mat(cur, hyper.k);
  return p;
}

SoftAssignment dmon_forward(const DmonParams& params, const NormalizedAdjacency& a,
                            const NodeFeatures& x, const DropoutMask* mask) {
  x.validate_for(a.n);
  check_dims(params, x.dim(), params.w_out.cols);
  ForwardCache fc = run_forward(params, a, features_mat(x), mask);
  return SoftAssignment{std::move(fc.c)};
}

DmonLossParts dmon_loss(const SoftAssignment& c, const Graph& g) {
  if (g.num_edges() < 1) fail(Errc::EmptyGraph, "dmon_loss on edgeless graph");
  if (c.c.rows != g.num_nodes()) fail(Errc::DimensionMismatch, "assignment rows != n");
  const int k = c.c.cols;
  const double two_m = 2.0 * static_cast<double>(g.num_edges());

  double tr_adj = 0.0;
  for (const auto& [u, v] : g.edges()) {
    const double* cu = c.c.row(u);
    const double* cv = c.c.row(v);
    double dot = 0.0;
    for (int j = 0; j < k; ++j) dot += cu[j] * cv[j];
    tr_adj += 2.0 * dot;
  }
  std::vector<double> ktc(k, 0.0);
  std::vector<double> colsum(k, 0.0);
  for (int u = 0; u < c.c.rows; ++u) {
    const double deg = g.degree(u);
    const double* cu = c.c.row(u);
    for (int j = 0; j < k; ++j) {
      ktc[j] += deg * cu[j];
      colsum[j] += cu[j];
    }
  }
  double ktc_sq = 0.0, col_norm = 0.0;
  for (int j = 0; j < k; ++j) {
    ktc_sq += ktc[j] * ktc[j];
    col_norm += colsum[j] * colsum[j];
  }
  col_norm = std::sqrt(col_norm);

  DmonLossParts parts;
  parts.modularity_term = -(tr_adj - ktc_sq / two_m) / two_m;
  parts.collapse_term =
      std::sqrt(static_cast<double>(k)) / static_cast<double>(c.c.rows) * col_norm - 1.0;
  parts.total = parts.modularity_term + parts.collapse_term;
  return parts;
}

DmonParams loss_gradients(const DmonParams& params, const NormalizedAdjacency& a,
                          const NodeFeatures& x, const Graph& g, const DmonHyper& hyper,
                          const DropoutMask* mask) {
  (void)hyper;
  x.validate_for(a.n);
  check_dims(params, x.dim(), params.w_out.cols);
  const Mat xm = features_mat(x);
  ForwardCache fc = run_forward(params, a, xm, mask);
  return run_backward(params, a, xm, g, mask, fc);
}

DmonTrainResult dmon_train(const Graph& g, const NodeFeatures& x, const DmonHyper& hyper) {
  if (g.num_edges() < 1) fail(Errc::EmptyGraph, "dmon_train on edgeless graph");
  if (hyper.epochs < 1 || hyper.learning_rate < 0.0)
    fail(Errc::ConfigError, "epochs >= 1 and non-negative learning rate required");
  x.validate_for(g.num_nodes());

  Rng init_rng(seed_mix(hyper.seed, {0x11}));
  Rng dropout_rng(seed_mix(hyper.seed, {0x12}));
  DmonParams params = dmon_init(x.dim(), hyper, init_rng);
  const NormalizedAdjacency a = normalized_adjacency(g);
  const Mat xm = x.values;

  DmonTrainResult result;
  result.loss_trace.reserve(hyper.epochs);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    DropoutMask mask;
    const DropoutMask* mask_ptr = nullptr;
    if (hyper.dropout_enabled && hyper.dropout_rate > 0.0) {
      mask = make_dropout_mask(g.num_nodes(), hyper.k, hyper.dropout_rate, dropout_rng);
      mask_ptr = &mask;
    }
    ForwardCache fc = run_forward(params, a, xm, mask_ptr);
    const DmonLossParts loss = dmon_loss(SoftAssignment{fc.c}, g);
    if (!std::isfinite(loss.total))
      fail(Errc::DivergenceDetected, "loss became non-finite at epoch " + std::to_string(epoch));
    result.loss_trace.push_back(loss.total);

    DmonParams grads = run_backward(params, a, xm, g, mask_ptr, fc);
    for (std::size_t l = 0; l < params.w.size(); ++l) {
      axpy_inplace(params.w[l], -hyper.learning_rate, grads.w[l]);
      axpy_inplace(params.w_skip[l], -hyper.learning_rate, grads.w_skip[l]);
    }
    axpy_inplace(params.w_out, -hyper.learning_rate, grads.w_out);
    if (!all_finite(params.w_out))
      fail(Errc::DivergenceDetected, "weights became non-finite at epoch " + std::to_string(epoch));
  }

  ForwardCache fc = run_forward(params, a, xm, nullptr);
  result.assignment = SoftAssignment{std::move(fc.c)};
  result.params = std::move(params);
  return result;
}

Partition hard_assignment(const SoftAssignment& c) {
  std::vector<int> labels(c.c.rows, 0);
  for (int i = 0; i < c.c.rows; ++i) {
    const double* row = c.c.row(i);
    int best = 0;
    for (int j = 1; j < c.c.cols; ++j) {
      if (row[j] > row[best]) best = j;
    }
    labels[i] = best;
  }
  return Partition::from_labels(labels);
}

}  // namespace comconceal
