#pragma once

#include <cstdint>
#include <vector>

#include "comconceal/graph.hpp"
#include "comconceal/linalg.hpp"
#include "comconceal/rng.hpp"

namespace comconceal {

inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

double selu(double v);
std::vector<double> selu(const std::vector<double>& v);

/// D^{-1/2} A D^{-1/2} without self-loops; rows of zero-degree nodes are
/// all-zero. Stored sparse.
struct NormalizedAdjacency {
  int n = 0;
  CsrMatrix a_hat;

  double entry(int i, int j) const { return a_hat.entry(i, j); }
};

NormalizedAdjacency normalized_adjacency(const Graph& g);

struct DmonHyper {
  int k = 2;
  std::vector<int> hidden_dims = {64};
  double learning_rate = 0.01;
  int epochs = 500;
  double dropout_rate = 0.5;
  double init_scale = 0.0;  // 0 -> Glorot uniform sqrt(6 / (fan_in + fan_out))
  std::uint64_t seed = 0;
  bool dropout_enabled = true;
};

/// Encoder weights. Layer l maps d_l -> d_{l+1} through A_hat * H * w[l] plus
/// the skip path X * w_skip[l]; w_out projects the last hidden layer to k
/// logits.
struct DmonParams {
  std::vector<Mat> w;
  std::vector<Mat> w_skip;
  Mat w_out;
};

/// Row-stochastic n x k soft cluster memberships.
struct SoftAssignment {
  Mat c;
};

/// Dropout on the pre-softmax logits: entry (i,j) is kept with probability
/// 1 - rate and survivors are rescaled by 1 / (1 - rate).
struct DropoutMask {
  bool enabled = false;
  double rate = 0.0;
  std::vector<std::uint8_t> keep;  // row-major n x k
};

DropoutMask make_dropout_mask(int n, int k, double rate, Rng& rng);

/// Column-wise zero-mean unit-variance standardization; constant columns are
/// centered only. The usual preprocessing applied to features before
/// clustering so one learning rate serves any raw feature scale.
NodeFeatures standardize_features(const NodeFeatures& x);

DmonParams dmon_init(int input_dim, const DmonHyper& hyper, Rng& rng);

/// Full forward pass; pass a mask to apply dropout to the logits.
SoftAssignment dmon_forward(const DmonParams& params, const NormalizedAdjacency& a,
                            const NodeFeatures& x, const DropoutMask* mask = nullptr);

struct DmonLossParts {
  double total = 0.0;
  double modularity_term = 0.0;  // -(1/2m) Tr(C^T B C)
  double collapse_term = 0.0;    // (sqrt(k)/n) ||column sums|| - 1
};

DmonLossParts dmon_loss(const SoftAssignment& c, const Graph& g);

/// Exact reverse-mode gradient of dmon_loss(dmon_forward(...)) with respect
/// to every weight matrix. Dropout must be off or pinned via `mask`.
DmonParams loss_gradients(const DmonParams& params, const NormalizedAdjacency& a,
                          const NodeFeatures& x, const Graph& g, const DmonHyper& hyper,
                          const DropoutMask* mask = nullptr);

struct DmonTrainResult {
  SoftAssignment assignment;       // computed with dropout disabled
  std::vector<double> loss_trace;  // objective at the start of each epoch
  DmonParams params;
};

/// Full-batch gradient descent for hyper.epochs steps. Throws
/// DivergenceDetected when the loss stops being finite.
DmonTrainResult dmon_train(const Graph& g, const NodeFeatures& x, const DmonHyper& hyper);

/// Argmax per row, smallest index on ties; labels are canonicalized so empty
/// clusters disappear.
Partition hard_assignment(const SoftAssignment& c);

}  // namespace comconceal
