#pragma once

#include <cstdint>

#include "comconceal/graph.hpp"
#include "comconceal/rng.hpp"

namespace comconceal {

/// Two-phase greedy Louvain: local moves to the neighbor community with the
/// best modularity gain (ties to the smallest community id), then community
/// aggregation, repeated until no move improves. Node visit order is drawn
/// from the rng, so different streams explore different local optima.
Partition louvain(const Graph& g, Rng& rng);

/// Consensus over `runs` independent seeded Louvain runs: pairs co-assigned
/// with frequency >= tau form an agreement graph whose connected components
/// are the consensus communities; components whose mean internal agreement
/// falls below tau get one re-clustering pass. Deterministic for a fixed
/// master seed.
Partition consensus_louvain(const Graph& g, int runs, double tau, std::uint64_t seed);

}  // namespace comconceal
