#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`; both write
// each output element with the same arithmetic, so results are bit-identical.

#include <cstddef>
#include <functional>
#include <span>

namespace mixann::kernels {

/// Row-major point block of `dim` columns.
struct PointBlock {
  std::span<const double> data;
  std::size_t dim = 0;

  std::size_t rows() const { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> row(std::size_t i) const { return data.subspan(i * dim, dim); }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return acc;
}

/// Per-point scoring function; must be safe to call concurrently.
using PointFn = std::function<double(std::span<const double>)>;

namespace serial {
void squared_distances(PointBlock points, std::span<const double> query, std::span<double> out);
void map_points(PointBlock points, const PointFn& fn, std::span<double> out);
}  // namespace serial

namespace parallel {
void squared_distances(PointBlock points, std::span<const double> query, std::span<double> out);
void map_points(PointBlock points, const PointFn& fn, std::span<double> out);
}  // namespace parallel

/// Below this many points the parallel kernels run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 4096;

/// Number of OpenMP threads the parallel kernels may use (1 without OpenMP).
int max_threads();

}  // namespace mixann::kernels
