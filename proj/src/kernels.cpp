#include "mixann/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mixann::kernels {

namespace serial {

void squared_distances(PointBlock points, std::span<const double> query, std::span<double> out) {
  const std::size_t n = points.rows();
  for (std::size_t i = 0; i < n; ++i) out[i] = squared_distance(points.row(i), query);
}

void map_points(PointBlock points, const PointFn& fn, std::span<double> out) {
  const std::size_t n = points.rows();
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(points.row(i));
}

}  // namespace serial

namespace parallel {

void squared_distances(PointBlock points, std::span<const double> query, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::ptrdiff_t>(kParallelThreshold))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r] = squared_distance(points.row(r), query);
  }
}

void map_points(PointBlock points, const PointFn& fn, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
  // Per-point work (a classifier prediction) is much heavier than a distance,
  // so parallelize from a lower size.
#pragma omp parallel for schedule(dynamic, 64) if (n >= 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r] = fn(points.row(r));
  }
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mixann::kernels
