#pragma once

#include <vector>

#include "comconceal/graph.hpp"

namespace comconceal {

/// Brandes betweenness centrality on the unweighted graph, reported as
/// unordered-pair counts (no normalization). Parallel over source nodes with
/// a chunked reduction, so results do not depend on thread count.
std::vector<double> betweenness_centrality(const Graph& g);

/// Closeness with the reachable-set scaling ((r-1)/(n-1)) * ((r-1)/sum_d);
/// isolated nodes get 0. Defined on disconnected graphs.
std::vector<double> closeness_centrality(const Graph& g);

}  // namespace comconceal
