// Compares the OpenMP kernels against their serial reference implementations
// on representative workloads. Build and run manually:
//   cmake --build build --target comconceal_bench && build/bench/comconceal_bench

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "comconceal/centrality.hpp"
#include "comconceal/dmon.hpp"
#include "comconceal/lfr.hpp"
#include "comconceal/linalg.hpp"
#include "comconceal/reference.hpp"
#include "comconceal/rng.hpp"

using namespace comconceal;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
         reps;
}

Mat random_mat(int r, int c, Rng& rng) {
  Mat m(r, c);
  for (double& v : m.data) v = rng.normal();
  return m;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.4f ms   parallel %9.4f ms   speedup %.2fx\n", name,
              serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  Rng rng(7);

  {
    const Mat a = random_mat(512, 512, rng);
    const Mat b = random_mat(512, 512, rng);
    const double t_ser = time_of([&] { reference::matmul(a, b); }, 3);
    const double t_par = time_of([&] { matmul(a, b); }, 3);
    row("matmul 512x512", t_ser, t_par);
  }

  LfrParams params;
  params.n = 800;
  params.avg_degree = 16;
  params.k_max = 60;
  params.s_min = 20;
  params.s_max = 120;
  params.mu = 0.2;
  const auto [g, truth] = generate_lfr(params, 3);

  {
    const double t_ser = time_of([&] { reference::betweenness(g); }, 1);
    const double t_par = time_of([&] { betweenness_centrality(g); }, 1);
    row("betweenness n=800", t_ser, t_par);
  }

  {
    FeatureGenParams fp;
    fp.sigma_c = 2.0;
    const NodeFeatures x = generate_features(truth, fp, 3);
    DmonHyper hyper;
    hyper.k = truth.k;
    Rng init(1);
    const DmonParams weights = dmon_init(x.dim(), hyper, init);
    const NormalizedAdjacency a = normalized_adjacency(g);
    const double t_ser = time_of([&] { reference::dmon_forward_dense(weights, a, x); }, 5);
    const double t_par = time_of([&] { dmon_forward(weights, a, x); }, 5);
    row("dmon forward n=800", t_ser, t_par);
  }
  return 0;
}
