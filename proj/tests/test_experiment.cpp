#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "comconceal/errors.hpp"
#include "comconceal/experiment.hpp"
#include "comconceal/plots.hpp"

using namespace comconceal;
namespace fs = std::filesystem;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = (fs::temp_directory_path() / name).string();
  std::ofstream f(path);
  f << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), {});
}

ExperimentRecord rec(double mu, double sc, double bb, const std::string& method, long r,
                     double m1, double m2) {
  ExperimentRecord out;
  out.mu = mu;
  out.sigma_c = sc;
  out.beta_b = bb;
  out.p = 0.5;
  out.method = method;
  out.realization = r;
  out.target = 0;
  out.m1 = m1;
  out.m2 = m2;
  out.ecs = 0.8;
  return out;
}

}  // namespace

TEST_CASE("sweep config parsing") {
  SUBCASE("valid config with defaults filled in") {
    const std::string path = write_file("cc_cfg_ok.json", R"({
      "lfr": {"n": 200, "avg_degree": 10, "k_max": 20, "s_min": [12], "mu": [0.1]},
      "features": {"sigma_c": [1.0]},
      "perturbation": {"beta_b": [0.5], "p": [0.5]},
      "realizations": 2,
      "master_seed": 3,
      "output_dir": "x"
    })");
    const SweepConfig c = load_sweep_config(path);
    CHECK(c.n == 200);
    CHECK(c.feature_dim == 32);
    CHECK(c.methods == std::vector<std::string>{"dice", "fcom-dice"});
    CHECK(c.dmon.epochs == 500);
    CHECK(c.ecs_alpha == 0.9);
    std::remove(path.c_str());
  }
  SUBCASE("empty grids are rejected") {
    const std::string path = write_file("cc_cfg_bad.json", R"({
      "lfr": {"n": 200, "avg_degree": 10, "k_max": 20, "s_min": [12], "mu": []},
      "features": {"sigma_c": [1.0]},
      "perturbation": {"beta_b": [0.5], "p": [0.5]},
      "realizations": 2, "master_seed": 3, "output_dir": "x"
    })");
    CHECK_THROWS_AS(load_sweep_config(path), Error);
    std::remove(path.c_str());
  }
  SUBCASE("unknown methods are rejected") {
    const std::string path = write_file("cc_cfg_bad2.json", R"({
      "lfr": {"n": 200, "avg_degree": 10, "k_max": 20, "s_min": [12], "mu": [0.1]},
      "features": {"sigma_c": [1.0]},
      "perturbation": {"beta_b": [0.5], "p": [0.5], "methods": ["gradient-attack"]},
      "realizations": 2, "master_seed": 3, "output_dir": "x"
    })");
    CHECK_THROWS_AS(load_sweep_config(path), Error);
    std::remove(path.c_str());
  }
}

TEST_CASE("ingest spec validation") {
  RealNetworkSpec spec;
  spec.edge_list_path = "does-not-matter.tsv";
  SUBCASE("original features need a path") {
    spec.use_original_features = true;
    CHECK_THROWS_AS(ingest_real_network(spec), Error);
  }
  SUBCASE("synthetic featurization needs sigma_c and no features path") {
    spec.use_original_features = false;
    CHECK_THROWS_AS(ingest_real_network(spec), Error);  // sigma_c missing
    spec.sigma_c = 2.0;
    spec.features_path = "extra.csv";
    CHECK_THROWS_AS(ingest_real_network(spec), Error);  // both sources given
  }
}

TEST_CASE("ingest on a toy file derives consensus labels and features") {
  const std::string path = write_file("cc_ingest_toy.edges", [] {
    std::string s;
    const int cliques[2][4] = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    for (const auto& c : cliques) {
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j)
          s += std::to_string(c[i]) + "\t" + std::to_string(c[j]) + "\n";
      }
    }
    return s;
  }());
  RealNetworkSpec spec;
  spec.edge_list_path = path;
  spec.sigma_c = 5.0;
  spec.feature_dim = 6;
  spec.consensus_runs = 6;
  spec.seed = 4;
  const IngestResult res = ingest_real_network(spec);
  CHECK(res.graph.num_nodes() == 8);
  CHECK(res.partition.k == 2);
  CHECK(res.features.rows() == 8);
  CHECK(res.features.dim() == 6);
  // Between-centroid distance dwarfs the unit within-community spread.
  double dist = 0.0;
  std::vector<double> c0(6, 0.0), c1(6, 0.0);
  for (int u = 0; u < 8; ++u) {
    for (int j = 0; j < 6; ++j) {
      (res.partition.labels[u] == 0 ? c0 : c1)[j] += res.features.row(u)[j] / 4.0;
    }
  }
  for (int j = 0; j < 6; ++j) dist += (c0[j] - c1[j]) * (c0[j] - c1[j]);
  CHECK(std::sqrt(dist) > 3.0);
  std::remove(path.c_str());
}

TEST_CASE("emit_plots") {
  SUBCASE("empty record sets are rejected") {
    CHECK_THROWS_AS(emit_plots({}, "unused"), Error);
  }
  SUBCASE("heatmap labels match the improvement table") {
    std::vector<ExperimentRecord> records;
    for (long r = 0; r < 3; ++r) {
      for (double bb : {0.2, 0.8}) {
        records.push_back(rec(0.1, 1.0, bb, "dice", r, 0.05, 0.2 + 0.01 * r));
        records.push_back(rec(0.1, 1.0, bb, "fcom-dice", r, 0.07, 0.3 + 0.02 * r));
      }
    }
    const fs::path dir = fs::temp_directory_path() / "cc_plot_test";
    fs::remove_all(dir);
    const auto written = emit_plots(records, dir.string());
    CHECK(written.size() == 4);  // 2 line charts + 2 heatmaps

    const auto cells = mean_relative_improvement(records);
    REQUIRE(cells.size() == 1);
    const std::string svg = slurp((dir / "heatmap_m2.svg").string());
    CHECK(svg.find(heatmap_label(cells[0].mean_dm2)) != std::string::npos);
    const std::string svg1 = slurp((dir / "heatmap_m1.svg").string());
    CHECK(svg1.find(heatmap_label(cells[0].mean_dm1)) != std::string::npos);

    // Byte-determinism across repeated emission.
    const fs::path dir2 = fs::temp_directory_path() / "cc_plot_test2";
    fs::remove_all(dir2);
    emit_plots(records, dir2.string());
    CHECK(slurp((dir / "lines_m2_mu0.1_sc1.svg").string()) ==
          slurp((dir2 / "lines_m2_mu0.1_sc1.svg").string()));
    fs::remove_all(dir);
    fs::remove_all(dir2);
  }
}
