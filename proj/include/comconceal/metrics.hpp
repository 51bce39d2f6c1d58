#pragma once

#include <vector>

#include "comconceal/graph.hpp"
#include "comconceal/linalg.hpp"

namespace comconceal {

/// Modularity matrix context B = A - k k^T / 2m. The dense matrix is built
/// on demand; metric computations use the sparse identity
/// Tr(C^T B C) = 2 * sum_edges <C_u, C_v> - ||k^T C||^2 / 2m instead.
struct ModularityContext {
  const Graph* graph;
  long m;
  std::vector<int> degrees;

  explicit ModularityContext(const Graph& g);

  double b_entry(int i, int j) const;
  Mat dense_b() const;
};

/// Newman modularity of a hard partition; the double sum runs over ordered
/// pairs including the i=j null-model diagonal.
double modularity(const Graph& g, const Partition& p);

/// (1/2m) Tr(C^T B C) for a hard one-hot or soft row-stochastic membership
/// matrix (n x k).
double spectral_modularity(const Graph& g, const Mat& c);

/// One-hot membership matrix of a partition.
Mat membership_matrix(const Partition& p);

/// M1 concealment score: spread of the target's members over the detected
/// communities. In [0, 1]; higher means better hidden.
double m1_score(const std::vector<int>& target, const Partition& detected);

/// M2 concealment score: how many outside nodes share detected communities
/// with the target ("hidden in the crowd"). In [0, 1].
double m2_score(const std::vector<int>& target, const Partition& detected, int n);

struct EcsParams {
  double alpha = 0.9;
};

/// Element-centric similarity between two hard partitions of the same node
/// set. Symmetric, label-invariant, 1 iff identical up to relabeling.
double element_centric_similarity(const Partition& a, const Partition& b,
                                  const EcsParams& params = {});

/// Mean squared distance from the target community's feature centroid to all
/// other community centroids.
double centroid_sq_distance(int target_id, const Partition& p, const NodeFeatures& x);

struct DescriptorRecord {
  double avg_centroid_sq_distance = 0.0;
  long community_size = 0;
  double inter_intra_ratio = 0.0;
  bool inter_intra_defined = true;  // false when the target has no intra edges
  double mean_degree = 0.0;
  double community_degree = 0.0;  // edges leaving the target
  double mean_betweenness = 0.0;
  double community_betweenness = 0.0;  // super-node value on the quotient graph
  double mean_closeness = 0.0;
  double community_closeness = 0.0;
};

/// All structural and feature descriptors of the target community.
DescriptorRecord community_descriptors(const Graph& g, const Partition& p,
                                       const NodeFeatures& x, int target_id);

}  // namespace comconceal
