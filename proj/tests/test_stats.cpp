#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "comconceal/errors.hpp"
#include "comconceal/graph_io.hpp"
#include "comconceal/rng.hpp"
#include "comconceal/stats.hpp"

using namespace comconceal;

namespace {

ExperimentRecord make_record(double mu, double sc, double bb, double p, const std::string& method,
                             long r, int target, double m1, double m2) {
  ExperimentRecord rec;
  rec.mu = mu;
  rec.sigma_c = sc;
  rec.beta_b = bb;
  rec.p = p;
  rec.method = method;
  rec.realization = r;
  rec.target = target;
  rec.m1 = m1;
  rec.m2 = m2;
  rec.ecs = 0.9;
  rec.desc.community_size = 10;
  return rec;
}

}  // namespace

TEST_CASE("relative improvement") {
  CHECK(relative_improvement(0.2, 0.2) == doctest::Approx(0.0));
  CHECK(relative_improvement(0.3, 0.2) == doctest::Approx(50.0));
  CHECK_THROWS_AS(relative_improvement(0.3, 0.0), Error);
}

TEST_CASE("mean_relative_improvement") {
  SUBCASE("equal pairs give zeros") {
    std::vector<ExperimentRecord> recs;
    recs.push_back(make_record(0.1, 1, 0.2, 0.5, "dice", 0, 0, 0.1, 0.4));
    recs.push_back(make_record(0.1, 1, 0.2, 0.5, "fcom-dice", 0, 0, 0.1, 0.4));
    const auto cells = mean_relative_improvement(recs);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].mean_dm2 == doctest::Approx(0.0));
    CHECK(cells[0].median_dm2 == doctest::Approx(0.0));
  }
  SUBCASE("two pairs at +10% and +30% give mean and median +20%") {
    std::vector<ExperimentRecord> recs;
    recs.push_back(make_record(0.1, 1, 0.2, 0.5, "dice", 0, 0, 0.1, 0.10));
    recs.push_back(make_record(0.1, 1, 0.2, 0.5, "fcom-dice", 0, 0, 0.1, 0.11));
    recs.push_back(make_record(0.1, 1, 0.4, 0.5, "dice", 0, 0, 0.1, 0.10));
    recs.push_back(make_record(0.1, 1, 0.4, 0.5, "fcom-dice", 0, 0, 0.1, 0.13));
    const auto cells = mean_relative_improvement(recs);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].mean_dm2 == doctest::Approx(20.0));
    CHECK(cells[0].median_dm2 == doctest::Approx(20.0));
    CHECK(cells[0].pairs_m2 == 2);
  }
  SUBCASE("zero baselines are excluded and counted") {
    std::vector<ExperimentRecord> recs;
    recs.push_back(make_record(0.1, 1, 0.2, 0.5, "dice", 0, 0, 0.0, 0.0));
    recs.push_back(make_record(0.1, 1, 0.2, 0.5, "fcom-dice", 0, 0, 0.2, 0.3));
    recs.push_back(make_record(0.1, 1, 0.4, 0.5, "dice", 0, 0, 0.1, 0.1));
    recs.push_back(make_record(0.1, 1, 0.4, 0.5, "fcom-dice", 0, 0, 0.2, 0.2));
    const auto cells = mean_relative_improvement(recs);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].zero_baseline_m2 == 1);
    CHECK(cells[0].pairs_m2 == 1);
    CHECK(cells[0].mean_dm2 == doctest::Approx(100.0));
  }
  SUBCASE("unpaired rows are rejected") {
    std::vector<ExperimentRecord> recs;
    recs.push_back(make_record(0.1, 1, 0.2, 0.5, "dice", 0, 0, 0.1, 0.4));
    CHECK_THROWS_AS(mean_relative_improvement(recs), Error);
  }
  SUBCASE("invariant to record order") {
    std::vector<ExperimentRecord> recs;
    for (int r = 0; r < 4; ++r) {
      recs.push_back(make_record(0.1, 1, 0.2, 0.5, "dice", r, 0, 0.1, 0.1 + 0.05 * r));
      recs.push_back(make_record(0.1, 1, 0.2, 0.5, "fcom-dice", r, 0, 0.1, 0.2 + 0.05 * r));
    }
    const auto a = mean_relative_improvement(recs);
    std::reverse(recs.begin(), recs.end());
    const auto b = mean_relative_improvement(recs);
    CHECK(a[0].mean_dm2 == doctest::Approx(b[0].mean_dm2));
    CHECK(a[0].median_dm2 == doctest::Approx(b[0].median_dm2));
  }
}

TEST_CASE("rate_of_change") {
  CHECK(rate_of_change({{0.0, 1.0}, {0.5, 1.0}, {1.0, 1.0}}) == doctest::Approx(0.0));
  CHECK(rate_of_change({{0.0, 0.0}, {0.5, 1.5}, {1.0, 3.0}}) == doctest::Approx(3.0));
  // Irregular grid: mean of pairwise slopes.
  const double want = ((0.2 - 0.0) / 0.1 + (0.3 - 0.2) / 0.4 + (0.9 - 0.3) / 0.5) / 3.0;
  CHECK(rate_of_change({{0.0, 0.0}, {0.1, 0.2}, {0.5, 0.3}, {1.0, 0.9}}) ==
        doctest::Approx(want));
  CHECK_THROWS_AS(rate_of_change({{0.0, 1.0}}), Error);
  CHECK_THROWS_AS(rate_of_change({{0.5, 1.0}, {0.5, 2.0}}), Error);
}

TEST_CASE("jonckheere-terpstra") {
  SUBCASE("statistic equals exhaustive pair counting on tiny groups") {
    const std::vector<std::vector<double>> groups = {{1.0, 2.0}, {2.0, 3.0}, {4.0}};
    // Pairs (g0,g1): 1<2,1<3,2==2(0.5),2<3 -> 3.5; (g0,g2): 2; (g1,g2): 2.
    const JtResult jt = jonckheere_terpstra(groups, Trend::Increasing);
    CHECK(jt.statistic == doctest::Approx(7.5));
  }
  SUBCASE("strongly increasing groups reject with tiny p") {
    std::vector<std::vector<double>> groups(3);
    Rng rng(5);
    for (int gidx = 0; gidx < 3; ++gidx) {
      for (int i = 0; i < 40; ++i) groups[gidx].push_back(gidx * 10.0 + rng.uniform());
    }
    const JtResult jt = jonckheere_terpstra(groups, Trend::Increasing);
    CHECK(jt.p_one_sided < 1e-3);
    // Reversed order with flipped direction gives the same p.
    std::vector<std::vector<double>> rev(groups.rbegin(), groups.rend());
    const JtResult jt2 = jonckheere_terpstra(rev, Trend::Decreasing);
    CHECK(jt2.p_one_sided == doctest::Approx(jt.p_one_sided).epsilon(1e-9));
  }
  SUBCASE("identical distributions keep z near zero over simulation") {
    Rng rng(77);
    double z_sum = 0.0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
      std::vector<std::vector<double>> groups(3);
      for (auto& g : groups) {
        for (int i = 0; i < 12; ++i) g.push_back(rng.normal());
      }
      z_sum += jonckheere_terpstra(groups, Trend::Increasing).z;
    }
    CHECK(std::abs(z_sum / reps) < 0.2);
  }
  SUBCASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(jonckheere_terpstra({{1.0}}, Trend::Increasing), Error);
    CHECK_THROWS_AS(jonckheere_terpstra({{1.0}, {}}, Trend::Increasing), Error);
  }
}

TEST_CASE("stouffer combination") {
  CHECK(stouffer_combine({1.7}) == doctest::Approx(1.7));
  CHECK(stouffer_combine({2.0, 2.0, 2.0, 2.0}) == doctest::Approx(4.0));
  CHECK(stouffer_combine({1.0, -1.0, 0.5}) == doctest::Approx(0.5 / std::sqrt(3.0)));
  CHECK_THROWS_AS(stouffer_combine({}), Error);
}

TEST_CASE("sign test") {
  CHECK(sign_test_p(0, 0) == doctest::Approx(1.0));
  CHECK(sign_test_p(10, 0) == doctest::Approx(std::pow(0.5, 10)));
  CHECK(sign_test_p(5, 5) > 0.05);
  CHECK(sign_test_p(30, 5) < 0.05);
}

TEST_CASE("spearman rho") {
  CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(std::abs(spearman_rho({1, 2, 3, 4, 5, 6}, {3, 1, 4, 1, 5, 2})) < 1.0);
}

TEST_CASE("records CSV round-trip") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "cc_records_test.csv").string();
  std::vector<ExperimentRecord> recs;
  recs.push_back(make_record(0.1, 5.0, 0.2, 0.5, "dice", 3, 1, 0.0625, 0.3333333333333333));
  recs.back().desc.inter_intra_defined = false;
  recs.push_back(make_record(0.3, 0.1, 0.8, 0.25, "fcom-dice", 7, 2, 0.125, 1.0 / 3.0));
  recs.back().exhausted_add = true;
  save_records(recs, path);
  const auto loaded = load_records(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].m2 == recs[0].m2);
  CHECK_FALSE(loaded[0].desc.inter_intra_defined);
  CHECK(loaded[1].exhausted_add);
  CHECK(loaded[1].method == "fcom-dice");

  // Re-saving parsed records reproduces the file byte-for-byte.
  const std::string path2 = (fs::temp_directory_path() / "cc_records_test2.csv").string();
  save_records(loaded, path2);
  std::ifstream f1(path), f2(path2);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("descriptor export") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "cc_desc_test.csv").string();
  std::vector<ExperimentRecord> recs;
  recs.push_back(make_record(0.1, 5.0, 0.2, 0.5, "dice", 0, 0, 0.1, 0.2));
  recs.back().desc.inter_intra_defined = false;
  recs.push_back(make_record(0.1, 5.0, 0.2, 0.5, "fcom-dice", 0, 0, 0.1, 0.2));
  recs.push_back(make_record(0.1, 5.0, 0.4, 0.5, "dice", 0, 0, 0.1, 0.2));
  export_descriptors(recs, path);

  std::ifstream f(path);
  std::vector<std::string> file_lines;
  std::string line;
  while (std::getline(f, line)) file_lines.push_back(line);
  CHECK(file_lines.size() == 4);  // header + 3 rows
  // Undefined ratio renders as an empty cell, never as NaN text.
  CHECK(file_lines[1].find("nan") == std::string::npos);
  CHECK(file_lines[1].find(",,") != std::string::npos);
  CHECK_THROWS_AS(export_descriptors({}, path), Error);
  std::remove(path.c_str());
}
