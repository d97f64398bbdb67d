// Serial vs OpenMP timings for the distance scan and batch prediction.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "mixann/classifiers.hpp"
#include "mixann/kernels.hpp"

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  using namespace mixann;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;

  std::printf("threads: %d\n", kernels::max_threads());
  std::printf("%-24s %10s %10s %12s %8s\n", "kernel", "n", "d", "serial ms", "speedup");

  for (std::size_t n : {1000u, 20000u, 200000u}) {
    const std::size_t d = 8;
    std::vector<double> pts(n * d);
    for (auto& v : pts) v = normal(rng);
    std::vector<double> q(d, 0.1), a(n), b(n);
    const kernels::PointBlock block{pts, d};
    const double ts = best_of(5, [&] { kernels::serial::squared_distances(block, q, a); });
    const double tp = best_of(5, [&] { kernels::parallel::squared_distances(block, q, b); });
    std::printf("%-24s %10zu %10zu %12.3f %8.2f%s\n", "squared_distances", n, d, ts, ts / tp,
                a == b ? "" : "  MISMATCH");
  }

  // Batch prediction with a KNN classifier over a 2-D grid.
  std::vector<LabeledSample> train;
  for (int i = 0; i < 600; ++i) train.push_back({{normal(rng), normal(rng)}, i % 20 == 0 ? 1 : 0});
  const KnnClassifier knn(10, Dataset(train, 2));
  for (std::size_t g : {50u, 200u}) {
    std::vector<double> grid;
    for (std::size_t r = 0; r < g; ++r)
      for (std::size_t c = 0; c < g; ++c) {
        grid.push_back(-3.0 + 6.0 * c / (g - 1));
        grid.push_back(-3.0 + 6.0 * r / (g - 1));
      }
    const kernels::PointBlock block{grid, 2};
    std::vector<double> a(g * g), b(g * g);
    const auto fn = [&](std::span<const double> x) { return knn.predict_proba(x); };
    const double ts = best_of(3, [&] { kernels::serial::map_points(block, fn, a); });
    const double tp = best_of(3, [&] { kernels::parallel::map_points(block, fn, b); });
    std::printf("%-24s %10zu %10d %12.3f %8.2f%s\n", "knn predict (map_points)", g * g, 2, ts, ts / tp,
                a == b ? "" : "  MISMATCH");
  }
  return 0;
}
