#include "mixann/neighbors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mixann/error.hpp"
#include "mixann/kernels.hpp"

namespace mixann {

NeighborIndex::NeighborIndex(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "index dimension must be positive");
}

NeighborIndex::NeighborIndex(std::span<const std::vector<double>> points, std::span<const Label> labels) {
  if (points.empty()) throw Error(ErrorCode::EmptyIndex, "cannot build an index over no points");
  if (points.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "points and labels differ in length");
  dim_ = points.front().size();
  if (dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "points must have positive dimension");
  points_.reserve(points.size() * dim_);
  labels_.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) append(points[i], labels[i]);
}

NeighborIndex::NeighborIndex(const Dataset& dataset) : dim_(dataset.dim()) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyIndex, "cannot build an index over an empty dataset");
  points_.reserve(dataset.size() * dim_);
  labels_.reserve(dataset.size());
  for (const auto& s : dataset.samples()) append(s);
}

void NeighborIndex::append(std::span<const double> point, Label label) {
  if (point.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "point of dimension " + std::to_string(point.size()) +
                                                  " appended to index of dimension " + std::to_string(dim_));
  }
  points_.insert(points_.end(), point.begin(), point.end());
  labels_.push_back(label);
}

std::size_t NeighborIndex::count(Label label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

void NeighborIndex::check_query(std::span<const double> query) const {
  if (labels_.empty()) throw Error(ErrorCode::EmptyIndex, "query against an empty index");
  if (query.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "query of dimension " + std::to_string(query.size()) +
                                                  " against index of dimension " + std::to_string(dim_));
  }
}

std::vector<double> NeighborIndex::distances(std::span<const double> query) const {
  check_query(query);
  std::vector<double> out(size());
  kernels::parallel::squared_distances({points_, dim_}, query, out);
  return out;
}

std::vector<Neighbor> NeighborIndex::k_nearest(std::span<const double> query, std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
  const auto dist = distances(query);
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take = std::min(k, order.size());
  auto before = [&dist](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), before);
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({order[i], dist[order[i]]});
  return out;
}

Neighbor NeighborIndex::nearest_with_label(std::span<const double> query, Label wanted) const {
  const auto dist = distances(query);
  Neighbor best{size(), 0.0};
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (labels_[i] != wanted) continue;
    // Strict comparison keeps the lowest index among equal distances.
    if (best.index == size() || dist[i] < best.distance) best = {i, dist[i]};
  }
  if (best.index == size())
    throw Error(ErrorCode::NoSuchLabel, "no point with label " + std::to_string(wanted));
  return best;
}

}  // namespace mixann
