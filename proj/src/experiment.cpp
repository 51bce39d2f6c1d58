#include "comconceal/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "comconceal/errors.hpp"
#include "comconceal/graph_io.hpp"
#include "comconceal/lfr.hpp"
#include "comconceal/louvain.hpp"
#include "comconceal/metrics.hpp"
#include "comconceal/perturb.hpp"

namespace comconceal {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::IoError, "cannot open config " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    fail(Errc::ConfigError, std::string("config parse: ") + e.what());
  }
  SweepConfig c;
  try {
    const json& lfr = j.at("lfr");
    c.n = lfr.at("n").get<int>();
    c.avg_degree = lfr.at("avg_degree").get<double>();
    c.k_max = lfr.at("k_max").get<int>();
    c.alpha = get_or(lfr, "alpha", -2.0);
    c.beta = get_or(lfr, "beta", -1.1);
    c.s_min = lfr.at("s_min").get<std::vector<int>>();
    c.s_max = get_or(lfr, "s_max", 0);
    c.mixing_tolerance = get_or(lfr, "mixing_tolerance", 0.03);
    c.mu = lfr.at("mu").get<std::vector<double>>();

    const json& feat = j.at("features");
    c.sigma_c = feat.at("sigma_c").get<std::vector<double>>();
    c.feature_dim = get_or(feat, "d", 32);

    const json& pert = j.at("perturbation");
    c.beta_b = pert.at("beta_b").get<std::vector<double>>();
    c.p = pert.at("p").get<std::vector<double>>();
    c.methods = get_or(pert, "methods", std::vector<std::string>{"dice", "fcom-dice"});

    if (j.contains("dmon")) {
      const json& dm = j.at("dmon");
      c.dmon.k = get_or(dm, "k", 0);
      c.dmon.hidden_dims = get_or(dm, "hidden", std::vector<int>{64});
      c.dmon.learning_rate = get_or(dm, "learning_rate", 0.01);
      c.dmon.epochs = get_or(dm, "epochs", 500);
      c.dmon.dropout_rate = get_or(dm, "dropout", 0.5);
      c.dmon.dropout_enabled = c.dmon.dropout_rate > 0.0;
      c.dmon.init_scale = get_or(dm, "init_scale", 0.0);
      c.dmon_standardize = get_or(dm, "standardize", true);
    }
    c.realizations = j.at("realizations").get<int>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.threads = get_or(j, "threads", 0);
    c.targets_limit = get_or(j, "targets_limit", 0);
    c.ecs_alpha = get_or(j, "ecs_alpha", 0.9);
    c.persist_artifacts = get_or(j, "persist_artifacts", false);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::ConfigError, std::string("config fields: ") + e.what());
  }
  if (c.mu.empty() || c.sigma_c.empty() || c.beta_b.empty() || c.p.empty() || c.methods.empty() ||
      c.s_min.empty() || c.realizations < 1)
    fail(Errc::ConfigError, "all grids must be nonempty and realizations >= 1");
  for (const auto& m : c.methods) {
    if (m != "dice" && m != "fcom-dice") fail(Errc::ConfigError, "unknown method " + m);
  }
  return c;
}

namespace {

using RecordKey = std::tuple<double, double, double, double, std::string, long, int>;

RecordKey key_of(const ExperimentRecord& r) {
  return {r.mu, r.sigma_c, r.beta_b, r.p, r.method, r.realization, r.target};
}

std::uint64_t method_id(const std::string& m) { return m == "dice" ? 1 : 2; }

std::uint64_t cell_seed(const SweepConfig& c, double mu, double sigma_c, double beta_b, double p,
                        const std::string& method, long realization, int target) {
  return seed_mix(c.master_seed,
                  {double_bits(mu), double_bits(sigma_c), double_bits(beta_b), double_bits(p),
                   method_id(method), static_cast<std::uint64_t>(realization),
                   static_cast<std::uint64_t>(target)});
}

struct PendingTask {
  double sigma_c = 0.0;
  double beta_b = 0.0;
  double p = 0.0;
  std::string method;
  int target = 0;
};

json config_to_json(const SweepConfig& c) {
  json j;
  j["lfr"] = {{"n", c.n},
              {"avg_degree", c.avg_degree},
              {"k_max", c.k_max},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"s_min", c.s_min},
              {"s_max", c.s_max},
              {"mixing_tolerance", c.mixing_tolerance},
              {"mu", c.mu}};
  j["features"] = {{"sigma_c", c.sigma_c}, {"d", c.feature_dim}};
  j["perturbation"] = {{"beta_b", c.beta_b}, {"p", c.p}, {"methods", c.methods}};
  j["dmon"] = {{"k", c.dmon.k},
               {"hidden", c.dmon.hidden_dims},
               {"learning_rate", c.dmon.learning_rate},
               {"epochs", c.dmon.epochs},
               {"dropout", c.dmon.dropout_rate},
               {"init_scale", c.dmon.init_scale},
               {"standardize", c.dmon_standardize}};
  j["realizations"] = c.realizations;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  j["targets_limit"] = c.targets_limit;
  j["ecs_alpha"] = c.ecs_alpha;
  j["persist_artifacts"] = c.persist_artifacts;
  return j;
}

std::string seed_hex(std::uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace

SweepSummary run_experiment(const SweepConfig& config) {
  if (config.output_dir.empty()) fail(Errc::ConfigError, "output_dir required");
  fs::create_directories(config.output_dir);
  const std::string records_path = (fs::path(config.output_dir) / "records.csv").string();
  const std::string manifest_path = (fs::path(config.output_dir) / "manifest.json").string();

  if (config.threads > 0) omp_set_num_threads(config.threads);

  // Existing rows are kept verbatim so reruns stay byte-identical.
  std::map<RecordKey, std::string> lines;
  if (fs::exists(records_path)) {
    std::ifstream f(records_path, std::ios::binary);
    std::string line;
    long line_no = 0;
    while (std::getline(f, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line_no == 1 && line == records_csv_header()) continue;
      lines[key_of(record_from_csv(line, line_no))] = line;
    }
  }

  SweepSummary summary;
  summary.records_path = records_path;
  summary.manifest_path = manifest_path;
  summary.reused = static_cast<long>(lines.size());
  std::vector<std::string> failures;

  LfrParams lfr;
  lfr.n = config.n;
  lfr.avg_degree = config.avg_degree;
  lfr.k_max = config.k_max;
  lfr.alpha = config.alpha;
  lfr.beta = config.beta;
  lfr.s_max = config.s_max;
  lfr.mixing_tolerance = config.mixing_tolerance;

  // One item = one generated topology, shared by every sigma_c. Realization
  // indices run globally across the s_min grid so the record key stays
  // unique without an s_min column.
  for (std::size_t smin_idx = 0; smin_idx < config.s_min.size(); ++smin_idx) {
    for (double mu : config.mu) {
      for (int r_local = 0; r_local < config.realizations; ++r_local) {
        const long realization = static_cast<long>(smin_idx) * config.realizations + r_local;
        LfrParams item_params = lfr;
        item_params.s_min = config.s_min[smin_idx];
        item_params.mu = mu;
        const std::uint64_t graph_seed =
            seed_mix(config.master_seed,
                     {0xA11CE, double_bits(mu), static_cast<std::uint64_t>(realization)});

        Graph graph;
        Partition truth;
        bool generated = false;
        const auto ensure_generated = [&]() {
          if (generated) return true;
          try {
            std::tie(graph, truth) = generate_lfr(item_params, graph_seed);
            generated = true;
          } catch (const Error& e) {
            failures.push_back("generate mu=" + format_double(mu) +
                               " realization=" + std::to_string(realization) + ": " + e.what());
          }
          return generated;
        };

        for (double sc : config.sigma_c) {
          // The target list depends on the generated community count, so the
          // topology is (cheaply) regenerated even when resuming; training
          // only runs for rows absent from the records file.
          if (!ensure_generated()) break;

          const auto truth_comms = truth.communities();
          const int n_targets =
              config.targets_limit > 0 ? std::min(config.targets_limit, truth.k) : truth.k;

          std::vector<PendingTask> tasks;
          for (int target = 0; target < n_targets; ++target) {
            for (double bb : config.beta_b) {
              for (double pp : config.p) {
                for (const auto& method : config.methods) {
                  if (!lines.count({mu, sc, bb, pp, method, realization, target}))
                    tasks.push_back({sc, bb, pp, method, target});
                }
              }
            }
          }
          if (tasks.empty()) continue;

          FeatureGenParams fp;
          fp.dim = config.feature_dim;
          fp.sigma_c = sc;
          const std::uint64_t feat_seed = seed_mix(graph_seed, {0xFEA7, double_bits(sc)});
          const NodeFeatures features = generate_features(truth, fp, feat_seed);

          // Baseline clustering of the unperturbed graph gives q_before.
          DmonHyper hyper = config.dmon;
          if (hyper.k <= 0) hyper.k = truth.k;
          hyper.seed = seed_mix(config.master_seed, {0xBA5E, double_bits(mu), double_bits(sc),
                                                     static_cast<std::uint64_t>(realization)});
          double q_before = 0.0;
          try {
            const DmonTrainResult base = dmon_train(
                graph, config.dmon_standardize ? standardize_features(features) : features,
                hyper);
            q_before = modularity(graph, hard_assignment(base.assignment));
          } catch (const Error& e) {
            failures.push_back("baseline mu=" + format_double(mu) + " sigma_c=" +
                               format_double(sc) + " realization=" + std::to_string(realization) +
                               ": " + e.what());
            continue;
          }

          // Descriptors depend only on (graph, features, target); share
          // across every row of the cell.
          std::vector<DescriptorRecord> descs(n_targets);
          for (int target = 0; target < n_targets; ++target) {
            descs[target] = community_descriptors(graph, truth, features, target);
          }

          std::vector<std::string> results(tasks.size());
          std::vector<std::string> errors(tasks.size());
#pragma omp parallel for schedule(dynamic)
          for (std::size_t t = 0; t < tasks.size(); ++t) {
            const PendingTask& task = tasks[t];
            try {
              const std::uint64_t cseed = cell_seed(config, mu, task.sigma_c, task.beta_b, task.p,
                                                    task.method, realization, task.target);
              PerturbSpec spec;
              spec.target = truth_comms[task.target];
              spec.beta_b = task.beta_b;
              spec.p = task.p;
              spec.seed = cseed;
              Rng perturb_rng(seed_mix(cseed, {1}));

              PerturbationResult pr;
              if (task.method == "dice") {
                pr = dice(graph, spec, perturb_rng);
              } else {
                pr = fcom_dice(graph, features, truth, spec, perturb_rng);
              }
              const NodeFeatures& x_after = pr.features ? *pr.features : features;

              if (config.persist_artifacts) {
                // Content-addressed by the cell seed, which is a pure
                // function of (config key, master seed).
                const fs::path art =
                    fs::path(config.output_dir) / "artifacts" / seed_hex(cseed);
                fs::create_directories(art);
                save_edge_list(pr.graph, (art / "edges.tsv").string());
                if (pr.features) save_features(*pr.features, (art / "features.csv").string());
              }

              DmonHyper cell_hyper = hyper;
              cell_hyper.seed = seed_mix(cseed, {2});
              const DmonTrainResult trained = dmon_train(
                  pr.graph,
                  config.dmon_standardize ? standardize_features(x_after) : x_after, cell_hyper);
              const Partition detected = hard_assignment(trained.assignment);

              ExperimentRecord rec;
              rec.mu = mu;
              rec.sigma_c = task.sigma_c;
              rec.beta_b = task.beta_b;
              rec.p = task.p;
              rec.method = task.method;
              rec.realization = realization;
              rec.target = task.target;
              rec.m1 = m1_score(truth_comms[task.target], detected);
              rec.m2 = m2_score(truth_comms[task.target], detected, config.n);
              rec.ecs = element_centric_similarity(truth, detected, {config.ecs_alpha});
              rec.q_before = q_before;
              rec.q_after = modularity(pr.graph, detected);
              rec.desc = descs[task.target];
              rec.exhausted_del = pr.exhausted_deletion;
              rec.exhausted_add = pr.exhausted_addition;
              results[t] = record_to_csv(rec);
            } catch (const std::exception& e) {
              errors[t] = e.what();
            }
          }
          for (std::size_t t = 0; t < tasks.size(); ++t) {
            const PendingTask& task = tasks[t];
            if (!errors[t].empty()) {
              failures.push_back(
                  "cell mu=" + format_double(mu) + " sigma_c=" + format_double(task.sigma_c) +
                  " beta_b=" + format_double(task.beta_b) + " p=" + format_double(task.p) +
                  " method=" + task.method + " realization=" + std::to_string(realization) +
                  " target=" + std::to_string(task.target) + ": " + errors[t]);
              continue;
            }
            lines[{mu, task.sigma_c, task.beta_b, task.p, task.method, realization,
                   task.target}] = results[t];
            ++summary.computed;
          }
        }
      }
    }
  }

  {
    std::ofstream f(records_path, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot write " + records_path);
    f << records_csv_header() << "\n";
    for (const auto& [k, line] : lines) f << line << "\n";
  }

  summary.failures = static_cast<long>(failures.size());
  {
    json manifest;
    manifest["version"] = kToolVersion;
    manifest["config"] = config_to_json(config);
    manifest["records"] = static_cast<long>(lines.size());
    manifest["failures"] = failures;
    std::ofstream f(manifest_path, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot write " + manifest_path);
    f << manifest.dump(2) << "\n";
  }
  return summary;
}

IngestResult ingest_real_network(const RealNetworkSpec& spec) {
  if (spec.use_original_features) {
    if (spec.features_path.empty())
      fail(Errc::ConfigError, "use_original_features requires a features path");
  } else {
    if (!spec.sigma_c.has_value() || !spec.features_path.empty())
      fail(Errc::ConfigError, "synthetic featurization requires sigma_c and no features path");
  }

  IngestResult out;
  FlexibleLoadResult loaded = load_edge_list_flexible(spec.edge_list_path);
  out.duplicates_collapsed = loaded.duplicates_collapsed;
  out.self_loops_dropped = loaded.self_loops_dropped;
  out.graph = std::move(loaded.graph);
  out.id_map = std::move(loaded.id_map);

  std::vector<int> kept(out.graph.num_nodes());
  for (int i = 0; i < out.graph.num_nodes(); ++i) kept[i] = i;
  if (spec.take_lcc) {
    auto [lcc, new_to_old] = largest_connected_component(out.graph);
    out.graph = std::move(lcc);
    kept = new_to_old;
    std::vector<std::string> ids;
    ids.reserve(kept.size());
    for (int old_id : kept) ids.push_back(out.id_map[old_id]);
    out.id_map = std::move(ids);
  }

  out.partition = consensus_louvain(out.graph, spec.consensus_runs, spec.consensus_tau, spec.seed);

  if (spec.use_original_features) {
    NodeFeatures all = load_features(spec.features_path);
    if (spec.take_lcc) {
      NodeFeatures subset(out.graph.num_nodes(), all.dim());
      for (int i = 0; i < out.graph.num_nodes(); ++i) {
        if (kept[i] >= all.rows())
          fail(Errc::DimensionMismatch, "features shorter than original node count");
        for (int j = 0; j < all.dim(); ++j) subset.row(i)[j] = all.row(kept[i])[j];
      }
      out.features = std::move(subset);
    } else {
      out.features = std::move(all);
    }
    out.features.validate_for(out.graph.num_nodes());
  } else {
    FeatureGenParams fp;
    fp.dim = spec.feature_dim;
    fp.sigma_c = *spec.sigma_c;
    out.features = generate_features(out.partition, fp, seed_mix(spec.seed, {0xF0}));
  }
  return out;
}

}  // namespace comconceal
