#pragma once

#include <vector>

#include "comconceal/dmon.hpp"
#include "comconceal/graph.hpp"
#include "comconceal/linalg.hpp"

namespace comconceal::reference {

// Serial, straight-line implementations of the parallel kernels. They trade
// speed for auditability and act as the comparison baseline in the unit
// tests and the benchmark target.

Mat matmul(const Mat& a, const Mat& b);

Mat dense_from_csr(const CsrMatrix& s);

/// Per-pair shortest-path counting; O(n * (n + m)) per source. Unordered-pair
/// counts, same convention as betweenness_centrality().
std::vector<double> betweenness(const Graph& g);

/// Eq.-style double sum over all ordered node pairs, including the diagonal
/// null-model terms.
double modularity_double_sum(const Graph& g, const Partition& p);

/// Dense straight-line recomputation of the DMoN forward pass (no dropout).
Mat dmon_forward_dense(const DmonParams& params, const NormalizedAdjacency& a,
                       const NodeFeatures& x);

}  // namespace comconceal::reference
