// End-to-end drive of the installed command-line tool over the documented
// file formats.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "comconceal/graph_io.hpp"
#include "comconceal/stats.hpp"

namespace fs = std::filesystem;

namespace {

std::string q(const std::string& s) { return "\"" + s + "\""; }

int run(const std::string& args) {
  const std::string cmd = std::string(COMCONCEAL_BIN) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), {});
}

}  // namespace

TEST_CASE("cli pipeline: generate -> cluster -> perturb -> evaluate -> consensus -> report") {
  const fs::path dir = fs::temp_directory_path() / "cc_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string prefix = (dir / "g").string();

  REQUIRE(run("generate --n 120 --avg-degree 8 --k-max 16 --s-min 12 --s-max 40 --mu 0.2 "
              "--sigma-c 2 --d 8 --seed 5 --out-prefix " + q(prefix)) == 0);
  REQUIRE(fs::exists(prefix + ".edges.tsv"));
  REQUIRE(fs::exists(prefix + ".partition.tsv"));
  REQUIRE(fs::exists(prefix + ".features.csv"));

  const std::string cpre = (dir / "c").string();
  REQUIRE(run("cluster --graph " + q(prefix + ".edges.tsv") + " --features " +
              q(prefix + ".features.csv") + " --k 5 --epochs 60 --seed 2 --out-prefix " +
              q(cpre)) == 0);
  REQUIRE(fs::exists(cpre + ".partition.tsv"));
  REQUIRE(fs::exists(cpre + ".loss.csv"));

  const std::string ppre = (dir / "p").string();
  REQUIRE(run("perturb --graph " + q(prefix + ".edges.tsv") + " --partition " +
              q(prefix + ".partition.tsv") + " --features " + q(prefix + ".features.csv") +
              " --method fcom-dice --target 0 --beta 0.5 --p 0.5 --seed 3 --out-prefix " +
              q(ppre)) == 0);
  REQUIRE(fs::exists(ppre + ".edges.tsv"));
  REQUIRE(fs::exists(ppre + ".features.csv"));
  REQUIRE(fs::exists(ppre + ".ledger.json"));

  const std::string eval_out = (dir / "eval.csv").string();
  REQUIRE(run("evaluate --graph " + q(prefix + ".edges.tsv") + " --partition " +
              q(cpre + ".partition.tsv") + " --reference " + q(prefix + ".partition.tsv") +
              " --features " + q(prefix + ".features.csv") +
              " --metrics m1,m2,ecs,q,descriptors --target 0 --out " + q(eval_out)) == 0);
  const std::string eval_text = slurp(eval_out);
  CHECK(eval_text.find("m1,m2,ecs,q") == 0);

  const std::string cons_out = (dir / "consensus.tsv").string();
  REQUIRE(run("consensus --graph " + q(prefix + ".edges.tsv") + " --runs 8 --tau 0.3 --seed 4 "
              "--out " + q(cons_out)) == 0);
  REQUIRE(fs::exists(cons_out));

  // Tiny sweep + report over its records.
  const std::string config_path = (dir / "sweep.json").string();
  {
    std::ofstream f(config_path);
    f << R"({
      "lfr": {"n": 120, "avg_degree": 8, "k_max": 16, "s_min": [12], "s_max": 40,
              "mu": [0.2], "mixing_tolerance": 0.03},
      "features": {"sigma_c": [2.0], "d": 8},
      "perturbation": {"beta_b": [0.3, 0.9], "p": [0.5], "methods": ["dice", "fcom-dice"]},
      "dmon": {"k": 0, "hidden": [16], "epochs": 60},
      "realizations": 1,
      "master_seed": 9,
      "output_dir": )" << "\"" << (dir / "sweep_out").string() << "\"" << R"(,
      "threads": 2,
      "targets_limit": 2
    })";
  }
  REQUIRE(run("experiment --config " + q(config_path)) == 0);
  const std::string records = (dir / "sweep_out" / "records.csv").string();
  REQUIRE(fs::exists(records));
  CHECK(comconceal::load_records(records).size() == 8);

  REQUIRE(run("report --in " + q(records) + " --out-dir " + q((dir / "report").string()) +
              " --plots") == 0);
  CHECK(fs::exists(dir / "report" / "improvement.csv"));
  CHECK(fs::exists(dir / "report" / "trend_tests.json"));
  CHECK(fs::exists(dir / "report" / "descriptors.csv"));
  CHECK(fs::exists(dir / "report" / "heatmap_m2.svg"));

  // Plot output is deterministic: emitting twice gives identical bytes.
  REQUIRE(run("report --in " + q(records) + " --out-dir " + q((dir / "report2").string()) +
              " --plots") == 0);
  CHECK(slurp((dir / "report" / "heatmap_m2.svg").string()) ==
        slurp((dir / "report2" / "heatmap_m2.svg").string()));

  fs::remove_all(dir);
}

TEST_CASE("cli ingest on a toy two-clique file") {
  const fs::path dir = fs::temp_directory_path() / "cc_cli_ingest";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string edges = (dir / "raw.edges").string();
  {
    std::ofstream f(edges);
    // Two 4-cliques, one duplicate line, one isolated pair far away.
    const int cliques[2][4] = {{0, 1, 2, 3}, {10, 11, 12, 13}};
    for (const auto& c : cliques) {
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) f << c[i] << "\t" << c[j] << "\n";
      }
    }
    f << "0\t1\n";  // duplicate
    f << "20\t21\n";
  }
  const std::string prefix = (dir / "net").string();
  REQUIRE(run("ingest --edges " + q(edges) + " --sigma-c 3 --d 4 --take-lcc --runs 6 "
              "--tau 0.3 --seed 2 --out-prefix " + q(prefix)) == 0);
  // The LCC is one 4-clique.
  const auto g = comconceal::load_edge_list(prefix + ".edges.tsv");
  CHECK(g.num_nodes() == 4);
  CHECK(g.num_edges() == 6);
  REQUIRE(fs::exists(prefix + ".idmap.tsv"));
  REQUIRE(fs::exists(prefix + ".features.csv"));
  fs::remove_all(dir);
}
