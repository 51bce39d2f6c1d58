#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "comconceal/graph.hpp"
#include "comconceal/linalg.hpp"
#include "comconceal/rng.hpp"

namespace comconceal {

struct PerturbSpec {
  std::vector<int> target;  // the community to conceal
  double beta_b = 0.0;      // budget as a fraction of the target's intra edges
  double p = 0.5;           // deletion share of the budget
  std::uint64_t seed = 0;
};

struct Budget {
  long b = 0;
  long b_del = 0;
  long b_add = 0;
};

/// b = floor(beta_b * e_intra); b_del = floor(b * p); b_add = b - b_del.
Budget budget_from_fraction(double beta_b, long e_intra, double p);

struct PerturbationResult {
  Graph graph;
  std::optional<NodeFeatures> features;  // engaged only by fcom_dice
  std::vector<Edge> deleted;
  std::vector<Edge> added;
  std::vector<std::pair<int, int>> feature_edits;  // (node, destination community)
  bool exhausted_deletion = false;
  bool exhausted_addition = false;
};

/// Community feature centroids plus the node-community similarity matrix
/// S_nc[u][i] = -||x_u - centroid_i||^2.
struct CentroidIndex {
  Mat centroids;  // k x d
  Mat s_nc;       // n x k
};

CentroidIndex community_centroids(const NodeFeatures& x, const Partition& p);

/// DICE: delete a uniform sample of the target's intra edges, add a uniform
/// sample of absent cross edges (one endpoint inside the target).
PerturbationResult dice(const Graph& g, const PerturbSpec& spec, Rng& rng);

/// FCom-DICE: deletion as in DICE; each addition picks a random target node,
/// attaches it to a uniform non-neighbor in the most feature-similar feasible
/// community, and overwrites the node's features with that community's
/// centroid. Centroids and S_nc are frozen from the input features.
PerturbationResult fcom_dice(const Graph& g, const NodeFeatures& x, const Partition& p,
                             const PerturbSpec& spec, Rng& rng);

}  // namespace comconceal
