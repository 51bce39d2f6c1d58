#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "comconceal/graph.hpp"
#include "comconceal/rng.hpp"

namespace comconceal {

struct LfrParams {
  int n = 1000;
  double avg_degree = 25.0;
  int k_max = 100;
  double alpha = -2.0;  // degree exponent
  double beta = -1.1;   // community-size exponent
  int s_min = 10;
  int s_max = 0;  // 0 -> max(k_max, s_min)
  double mu = 0.1;
  double mixing_tolerance = 0.03;
  long max_rewire_iters = -1;  // -1 -> 50 * m
};

struct FeatureGenParams {
  int dim = 32;
  double sigma_c = 1.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// Draws `count` integers from p(x) proportional to x^exponent on the
/// discrete support [x_min, x_max] by inverse-CDF sampling.
std::vector<int> sample_power_law(double exponent, int x_min, int x_max, int count, Rng& rng);

/// Analytic mean of the discrete power law on [x_min, x_max].
double power_law_mean(double exponent, int x_min, int x_max);

/// Degree-weighted fraction of edge endpoints that leave their community:
/// (# cross-community endpoints) / (2m).
double empirical_mixing(const Graph& g, const Partition& p);

/// LFR benchmark graph with ground-truth communities. Deterministic for a
/// fixed (params, seed); the degree, size, wiring and feature streams are
/// split from the master seed at fixed offsets.
std::pair<Graph, Partition> generate_lfr(const LfrParams& params, std::uint64_t seed);

/// Per-community Gaussian features: centroid ~ N(0, sigma_c^2 I), rows
/// ~ N(centroid[c_u], sigma^2 I). Uses the feature sub-stream of `seed`, so
/// regenerating features does not perturb an LFR topology drawn from the
/// same master seed.
NodeFeatures generate_features(const Partition& p, const FeatureGenParams& fp, std::uint64_t seed);

}  // namespace comconceal
