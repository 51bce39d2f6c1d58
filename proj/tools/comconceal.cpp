// Command-line front end: generation, perturbation, clustering, evaluation
// and sweep orchestration over the file formats described in the README.

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "comconceal/dmon.hpp"
#include "comconceal/errors.hpp"
#include "comconceal/experiment.hpp"
#include "comconceal/graph_io.hpp"
#include "comconceal/lfr.hpp"
#include "comconceal/louvain.hpp"
#include "comconceal/metrics.hpp"
#include "comconceal/perturb.hpp"
#include "comconceal/plots.hpp"
#include "comconceal/stats.hpp"

namespace cc = comconceal;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GenerateArgs {
  cc::LfrParams lfr;
  double sigma_c = 1.0;
  int d = 32;
  std::uint64_t seed = 1;
  std::string out_prefix;
};

int cmd_generate(const GenerateArgs& a) {
  auto [graph, truth] = cc::generate_lfr(a.lfr, a.seed);
  cc::FeatureGenParams fp;
  fp.dim = a.d;
  fp.sigma_c = a.sigma_c;
  const cc::NodeFeatures x = cc::generate_features(truth, fp, a.seed);
  cc::save_edge_list(graph, a.out_prefix + ".edges.tsv");
  cc::save_partition(truth, a.out_prefix + ".partition.tsv");
  cc::save_features(x, a.out_prefix + ".features.csv");
  std::cout << "n=" << graph.num_nodes() << " m=" << graph.num_edges()
            << " communities=" << truth.k
            << " mixing=" << cc::format_double(cc::empirical_mixing(graph, truth)) << "\n";
  return 0;
}

struct PerturbArgs {
  std::string graph_path, partition_path, features_path;
  std::string method = "dice";
  int target = 0;
  double beta = 0.5;
  double p = 0.5;
  std::uint64_t seed = 1;
  std::string out_prefix;
};

int cmd_perturb(const PerturbArgs& a) {
  const cc::Graph g = cc::load_edge_list(a.graph_path);
  const cc::Partition part = cc::load_partition(a.partition_path);
  if (a.target < 0 || a.target >= part.k)
    cc::fail(cc::Errc::TargetMissing, "community " + std::to_string(a.target));

  cc::PerturbSpec spec;
  spec.target = part.communities()[a.target];
  spec.beta_b = a.beta;
  spec.p = a.p;
  spec.seed = a.seed;
  cc::Rng rng(cc::seed_mix(a.seed, {1}));

  cc::PerturbationResult res;
  if (a.method == "dice") {
    res = cc::dice(g, spec, rng);
  } else if (a.method == "fcom-dice") {
    if (a.features_path.empty())
      cc::fail(cc::Errc::ConfigError, "fcom-dice requires --features");
    const cc::NodeFeatures x = cc::load_features(a.features_path);
    res = cc::fcom_dice(g, x, part, spec, rng);
  } else {
    cc::fail(cc::Errc::ConfigError, "unknown method " + a.method);
  }

  cc::save_edge_list(res.graph, a.out_prefix + ".edges.tsv");
  if (res.features) cc::save_features(*res.features, a.out_prefix + ".features.csv");

  json ledger;
  ledger["method"] = a.method;
  ledger["target"] = a.target;
  ledger["beta_b"] = a.beta;
  ledger["p"] = a.p;
  ledger["seed"] = a.seed;
  auto edges_json = [](const std::vector<cc::Edge>& edges) {
    json arr = json::array();
    for (const auto& [u, v] : edges) arr.push_back({u, v});
    return arr;
  };
  ledger["deleted"] = edges_json(res.deleted);
  ledger["added"] = edges_json(res.added);
  json edits = json::array();
  for (const auto& [node, comm] : res.feature_edits) edits.push_back({node, comm});
  ledger["feature_edits"] = edits;
  ledger["exhausted_deletion"] = res.exhausted_deletion;
  ledger["exhausted_addition"] = res.exhausted_addition;
  std::ofstream f(a.out_prefix + ".ledger.json", std::ios::binary);
  f << ledger.dump(2) << "\n";

  std::cout << "deleted=" << res.deleted.size() << " added=" << res.added.size()
            << " feature_edits=" << res.feature_edits.size() << "\n";
  return 0;
}

struct ClusterArgs {
  std::string graph_path, features_path;
  cc::DmonHyper hyper;
  bool standardize = true;
  std::string out_prefix;
};

int cmd_cluster(const ClusterArgs& a) {
  const cc::Graph g = cc::load_edge_list(a.graph_path);
  const cc::NodeFeatures x = cc::load_features(a.features_path);
  const cc::DmonTrainResult res =
      cc::dmon_train(g, a.standardize ? cc::standardize_features(x) : x, a.hyper);
  const cc::Partition detected = cc::hard_assignment(res.assignment);
  cc::save_partition(detected, a.out_prefix + ".partition.tsv");
  {
    std::ofstream f(a.out_prefix + ".loss.csv", std::ios::binary);
    f << "epoch,loss\n";
    for (std::size_t e = 0; e < res.loss_trace.size(); ++e)
      f << e << "," << cc::format_double(res.loss_trace[e]) << "\n";
  }
  std::cout << "clusters=" << detected.k
            << " final_loss=" << cc::format_double(res.loss_trace.back()) << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string graph_path, partition_path, reference_path, features_path;
  std::string metrics = "m1,m2,ecs,q";
  int target = 0;
  double ecs_alpha = 0.9;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const cc::Graph g = cc::load_edge_list(a.graph_path);
  const cc::Partition detected = cc::load_partition(a.partition_path);

  std::vector<std::string> wanted;
  {
    std::string cur;
    for (char ch : a.metrics + ",") {
      if (ch == ',') {
        if (!cur.empty()) wanted.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
  }

  std::optional<cc::Partition> reference;
  if (!a.reference_path.empty()) reference = cc::load_partition(a.reference_path);
  std::optional<cc::NodeFeatures> features;
  if (!a.features_path.empty()) features = cc::load_features(a.features_path);

  std::vector<std::pair<std::string, std::string>> row;
  for (const auto& metric : wanted) {
    if (metric == "m1" || metric == "m2") {
      if (!reference) cc::fail(cc::Errc::ConfigError, metric + " needs --reference");
      const auto target_nodes = reference->communities().at(a.target);
      const double v = metric == "m1"
                           ? cc::m1_score(target_nodes, detected)
                           : cc::m2_score(target_nodes, detected, g.num_nodes());
      row.emplace_back(metric, cc::format_double(v));
    } else if (metric == "ecs") {
      if (!reference) cc::fail(cc::Errc::ConfigError, "ecs needs --reference");
      row.emplace_back(
          metric, cc::format_double(cc::element_centric_similarity(
                      *reference, detected, {a.ecs_alpha})));
    } else if (metric == "q") {
      row.emplace_back(metric, cc::format_double(cc::modularity(g, detected)));
    } else if (metric == "descriptors") {
      if (!reference || !features)
        cc::fail(cc::Errc::ConfigError, "descriptors need --reference and --features");
      const cc::DescriptorRecord d = cc::community_descriptors(g, *reference, *features, a.target);
      row.emplace_back("centroid_sq_dist", cc::format_double(d.avg_centroid_sq_distance));
      row.emplace_back("community_size", std::to_string(d.community_size));
      row.emplace_back("inter_intra_ratio",
                       d.inter_intra_defined ? cc::format_double(d.inter_intra_ratio) : "");
      row.emplace_back("mean_degree", cc::format_double(d.mean_degree));
      row.emplace_back("community_degree", cc::format_double(d.community_degree));
      row.emplace_back("mean_betweenness", cc::format_double(d.mean_betweenness));
      row.emplace_back("community_betweenness", cc::format_double(d.community_betweenness));
      row.emplace_back("mean_closeness", cc::format_double(d.mean_closeness));
      row.emplace_back("community_closeness", cc::format_double(d.community_closeness));
    } else {
      cc::fail(cc::Errc::ConfigError, "unknown metric " + metric);
    }
  }

  std::ostringstream header, values;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) {
      header << ",";
      values << ",";
    }
    header << row[i].first;
    values << row[i].second;
  }
  const std::string text = header.str() + "\n" + values.str() + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    f << text;
  }
  return 0;
}

struct ConsensusArgs {
  std::string graph_path;
  int runs = 50;
  double tau = 0.3;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_consensus(const ConsensusArgs& a) {
  const cc::Graph g = cc::load_edge_list(a.graph_path);
  const cc::Partition p = cc::consensus_louvain(g, a.runs, a.tau, a.seed);
  cc::save_partition(p, a.out);
  std::cout << "communities=" << p.k << " q=" << cc::format_double(cc::modularity(g, p)) << "\n";
  return 0;
}

struct ReportArgs {
  std::string records_path;
  std::string out_dir;
  bool plots = false;
};

int cmd_report(const ReportArgs& a) {
  const auto records = cc::load_records(a.records_path);
  if (records.empty()) cc::fail(cc::Errc::EmptyInput, "no records in " + a.records_path);
  fs::create_directories(a.out_dir);

  // Improvement tables.
  const auto cells = cc::mean_relative_improvement(records);
  {
    std::ofstream f((fs::path(a.out_dir) / "improvement.csv").string(), std::ios::binary);
    f << "mu,sigma_c,mean_dm1,median_dm1,mean_dm2,median_dm2,pairs_m1,pairs_m2,"
         "zero_baseline_m1,zero_baseline_m2\n";
    for (const auto& c : cells) {
      f << cc::format_double(c.mu) << ',' << cc::format_double(c.sigma_c) << ','
        << cc::format_double(c.mean_dm1) << ',' << cc::format_double(c.median_dm1) << ','
        << cc::format_double(c.mean_dm2) << ',' << cc::format_double(c.median_dm2) << ','
        << c.pairs_m1 << ',' << c.pairs_m2 << ',' << c.zero_baseline_m1 << ','
        << c.zero_baseline_m2 << "\n";
    }
  }

  // Trend tests: per (mu, beta_b, p, method) cell, one-sided JT across
  // sigma_c groups for "smaller sigma_c -> larger M2", Stouffer-combined.
  json trends;
  {
    std::map<std::tuple<double, double, double, std::string>,
             std::map<double, std::vector<double>>>
        groups;
    for (const auto& r : records)
      groups[{r.mu, r.beta_b, r.p, r.method}][r.sigma_c].push_back(r.m2);
    std::vector<double> zs;
    json per_cell = json::array();
    for (const auto& [key, by_sigma] : groups) {
      if (by_sigma.size() < 2) continue;
      std::vector<std::vector<double>> ordered;
      for (const auto& [sc, vals] : by_sigma) ordered.push_back(vals);
      try {
        const cc::JtResult jt = cc::jonckheere_terpstra(ordered, cc::Trend::Decreasing);
        zs.push_back(jt.z);
        per_cell.push_back({{"mu", std::get<0>(key)},
                            {"beta_b", std::get<1>(key)},
                            {"p", std::get<2>(key)},
                            {"method", std::get<3>(key)},
                            {"z", jt.z},
                            {"p_one_sided", jt.p_one_sided}});
      } catch (const cc::Error&) {
        // degenerate cell (e.g. constant metric); skipped
      }
    }
    trends["hypothesis"] = "M2 decreases with sigma_c (smaller sigma_c -> larger M2)";
    trends["cells"] = per_cell;
    if (!zs.empty()) {
      const double z = cc::stouffer_combine(zs);
      trends["stouffer_z"] = z;
      trends["stouffer_p_one_sided"] = cc::normal_sf(z);
    }
    std::ofstream f((fs::path(a.out_dir) / "trend_tests.json").string(), std::ios::binary);
    f << trends.dump(2) << "\n";
  }

  cc::export_descriptors(records, (fs::path(a.out_dir) / "descriptors.csv").string());

  if (a.plots) cc::emit_plots(records, a.out_dir);
  std::cout << "cells=" << cells.size() << " out=" << a.out_dir << "\n";
  return 0;
}

struct IngestArgs {
  cc::RealNetworkSpec spec;
  double sigma_c_flag = -1.0;
  std::string out_prefix;
};

int cmd_ingest(IngestArgs& a) {
  if (a.sigma_c_flag > 0) a.spec.sigma_c = a.sigma_c_flag;
  const cc::IngestResult res = cc::ingest_real_network(a.spec);
  cc::save_edge_list(res.graph, a.out_prefix + ".edges.tsv");
  cc::save_partition(res.partition, a.out_prefix + ".partition.tsv");
  cc::save_features(res.features, a.out_prefix + ".features.csv");
  cc::save_id_map(res.id_map, a.out_prefix + ".idmap.tsv");
  std::cout << "n=" << res.graph.num_nodes() << " m=" << res.graph.num_edges()
            << " consensus_communities=" << res.partition.k
            << " duplicates_collapsed=" << res.duplicates_collapsed
            << " self_loops_dropped=" << res.self_loops_dropped << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"community concealment toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 = default)");

  GenerateArgs gen;
  auto* sc_gen = app.add_subcommand("generate", "generate a featurized LFR benchmark graph");
  sc_gen->add_option("--n", gen.lfr.n, "node count");
  sc_gen->add_option("--avg-degree", gen.lfr.avg_degree, "target mean degree");
  sc_gen->add_option("--k-max", gen.lfr.k_max, "maximum degree");
  sc_gen->add_option("--alpha", gen.lfr.alpha, "degree exponent");
  sc_gen->add_option("--beta", gen.lfr.beta, "community-size exponent");
  sc_gen->add_option("--s-min", gen.lfr.s_min, "minimum community size");
  sc_gen->add_option("--s-max", gen.lfr.s_max, "maximum community size (0 = auto)");
  sc_gen->add_option("--mu", gen.lfr.mu, "mixing parameter");
  sc_gen->add_option("--mixing-tolerance", gen.lfr.mixing_tolerance, "allowed |mu_hat - mu|");
  sc_gen->add_option("--sigma-c", gen.sigma_c, "feature centroid spread");
  sc_gen->add_option("--d", gen.d, "feature dimension");
  sc_gen->add_option("--seed", gen.seed, "master seed");
  sc_gen->add_option("--out-prefix", gen.out_prefix, "output file prefix")->required();

  PerturbArgs pert;
  auto* sc_pert = app.add_subcommand("perturb", "apply DICE or FCom-DICE to a target community");
  sc_pert->add_option("--graph", pert.graph_path)->required();
  sc_pert->add_option("--partition", pert.partition_path)->required();
  sc_pert->add_option("--features", pert.features_path);
  sc_pert->add_option("--method", pert.method, "dice | fcom-dice");
  sc_pert->add_option("--target", pert.target, "community id to conceal");
  sc_pert->add_option("--beta", pert.beta, "budget fraction of intra edges");
  sc_pert->add_option("--p", pert.p, "deletion share of the budget");
  sc_pert->add_option("--seed", pert.seed);
  sc_pert->add_option("--out-prefix", pert.out_prefix)->required();

  ClusterArgs clus;
  auto* sc_clus = app.add_subcommand("cluster", "train the DMoN clusterer");
  sc_clus->add_option("--graph", clus.graph_path)->required();
  sc_clus->add_option("--features", clus.features_path)->required();
  sc_clus->add_option("--k", clus.hyper.k, "cluster count")->required();
  sc_clus->add_option("--hidden", clus.hyper.hidden_dims, "hidden layer widths");
  sc_clus->add_option("--lr", clus.hyper.learning_rate);
  sc_clus->add_option("--epochs", clus.hyper.epochs);
  sc_clus->add_option("--dropout", clus.hyper.dropout_rate);
  sc_clus->add_option("--standardize", clus.standardize,
                      "column-standardize features before training (default 1)");
  sc_clus->add_option("--seed", clus.hyper.seed);
  sc_clus->add_option("--out-prefix", clus.out_prefix)->required();

  EvaluateArgs eval;
  auto* sc_eval = app.add_subcommand("evaluate", "score a detected partition");
  sc_eval->add_option("--graph", eval.graph_path)->required();
  sc_eval->add_option("--partition", eval.partition_path, "detected partition")->required();
  sc_eval->add_option("--reference", eval.reference_path, "ground-truth partition");
  sc_eval->add_option("--features", eval.features_path);
  sc_eval->add_option("--metrics", eval.metrics, "comma list: m1,m2,ecs,q,descriptors");
  sc_eval->add_option("--target", eval.target, "target community in the reference");
  sc_eval->add_option("--ecs-alpha", eval.ecs_alpha);
  sc_eval->add_option("--out", eval.out, "write CSV here instead of stdout");

  ConsensusArgs cons;
  auto* sc_cons = app.add_subcommand("consensus", "consensus Louvain reference partition");
  sc_cons->add_option("--graph", cons.graph_path)->required();
  sc_cons->add_option("--runs", cons.runs);
  sc_cons->add_option("--tau", cons.tau);
  sc_cons->add_option("--seed", cons.seed);
  sc_cons->add_option("--out", cons.out)->required();

  std::string config_path;
  auto* sc_exp = app.add_subcommand("experiment", "run a configured sweep");
  sc_exp->add_option("--config", config_path, "sweep config JSON")->required();

  ReportArgs rep;
  auto* sc_rep = app.add_subcommand("report", "aggregate a records file");
  sc_rep->add_option("--in", rep.records_path)->required();
  sc_rep->add_option("--out-dir", rep.out_dir)->required();
  sc_rep->add_flag("--plots", rep.plots, "also emit SVG figures");

  IngestArgs ing;
  auto* sc_ing = app.add_subcommand("ingest", "prepare a real network");
  sc_ing->add_option("--edges", ing.spec.edge_list_path)->required();
  sc_ing->add_option("--features", ing.spec.features_path, "original features CSV");
  sc_ing->add_flag("--use-original-features", ing.spec.use_original_features);
  sc_ing->add_option("--sigma-c", ing.sigma_c_flag, "synthesize features with this spread");
  sc_ing->add_option("--d", ing.spec.feature_dim);
  sc_ing->add_flag("--take-lcc", ing.spec.take_lcc);
  sc_ing->add_option("--runs", ing.spec.consensus_runs);
  sc_ing->add_option("--tau", ing.spec.consensus_tau);
  sc_ing->add_option("--seed", ing.spec.seed);
  sc_ing->add_option("--out-prefix", ing.out_prefix)->required();

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (sc_gen->parsed()) return cmd_generate(gen);
    if (sc_pert->parsed()) return cmd_perturb(pert);
    if (sc_clus->parsed()) return cmd_cluster(clus);
    if (sc_eval->parsed()) return cmd_evaluate(eval);
    if (sc_cons->parsed()) return cmd_consensus(cons);
    if (sc_exp->parsed()) {
      cc::SweepConfig config = cc::load_sweep_config(config_path);
      if (threads > 0) config.threads = threads;
      const cc::SweepSummary s = cc::run_experiment(config);
      std::cout << "computed=" << s.computed << " reused=" << s.reused
                << " failures=" << s.failures << " records=" << s.records_path << "\n";
      return s.failures == 0 ? 0 : 1;
    }
    if (sc_rep->parsed()) return cmd_report(rep);
    if (sc_ing->parsed()) return cmd_ingest(ing);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
