#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "comconceal/dmon.hpp"
#include "comconceal/graph.hpp"
#include "comconceal/stats.hpp"

namespace comconceal {

inline constexpr const char* kToolVersion = "comconceal 0.1.0";

struct SweepConfig {
  // LFR grid
  int n = 300;
  double avg_degree = 12.0;
  int k_max = 30;
  double alpha = -2.0;
  double beta = -1.1;
  std::vector<int> s_min = {15};
  int s_max = 0;  // 0 -> max(k_max, s_min)
  double mixing_tolerance = 0.03;
  std::vector<double> mu = {0.1};
  // Feature grid
  std::vector<double> sigma_c = {1.0};
  int feature_dim = 32;
  // Perturbation grid
  std::vector<double> beta_b = {0.5};
  std::vector<double> p = {0.5};
  std::vector<std::string> methods = {"dice", "fcom-dice"};
  // Clusterer
  DmonHyper dmon;
  bool dmon_standardize = true;  // column-standardize features before training
  // Sweep setup
  int realizations = 5;
  std::uint64_t master_seed = 1;
  std::string output_dir;
  int threads = 0;        // 0 -> leave the OpenMP default alone
  int targets_limit = 0;  // 0 -> every ground-truth community in turn
  double ecs_alpha = 0.9;
  // When set, each computed cell also writes its perturbed graph (and
  // features) under <output_dir>/artifacts/<cell-seed-hex>/.
  bool persist_artifacts = false;
};

SweepConfig load_sweep_config(const std::string& path);

struct SweepSummary {
  long computed = 0;
  long reused = 0;
  long failures = 0;
  std::string records_path;
  std::string manifest_path;
};

/// Runs every grid cell not already present in <output_dir>/records.csv and
/// rewrites the file sorted by cell key, reusing existing rows verbatim so a
/// completed sweep rewrites byte-identically. A manifest.json captures the
/// config and version. Per-cell failures are recorded and skipped.
SweepSummary run_experiment(const SweepConfig& config);

struct RealNetworkSpec {
  std::string edge_list_path;
  std::string features_path;  // empty unless use_original_features
  bool use_original_features = false;
  std::optional<double> sigma_c;  // synthetic featurization spread
  int feature_dim = 32;
  bool take_lcc = false;
  int consensus_runs = 50;
  double consensus_tau = 0.3;
  std::uint64_t seed = 1;
};

struct IngestResult {
  Graph graph;
  NodeFeatures features;
  Partition partition;                // consensus Louvain labels
  std::vector<std::string> id_map;    // new id -> original token
  long duplicates_collapsed = 0;
  long self_loops_dropped = 0;
};

/// Loads a real network, optionally restricts to the largest connected
/// component, derives a consensus-Louvain reference partition and either
/// loads original features or synthesizes Gaussian ones per community.
IngestResult ingest_real_network(const RealNetworkSpec& spec);

}  // namespace comconceal
