#pragma once

#include <span>
#include <vector>

#include "mixann/core_data.hpp"

namespace mixann {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;  // squared Euclidean

  bool operator==(const Neighbor&) const = default;
};

/// Exact brute-force k-NN over a growing point set. Distances are squared
/// Euclidean; ties are broken by ascending point index. Appends never move
/// existing points, so indices are stable.
class NeighborIndex {
public:
  NeighborIndex() = default;
  explicit NeighborIndex(std::size_t dim);
  NeighborIndex(std::span<const std::vector<double>> points, std::span<const Label> labels);
  explicit NeighborIndex(const Dataset& dataset);

  void append(std::span<const double> point, Label label);
  void append(const LabeledSample& sample) { append(sample.features, sample.label); }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(points_).subspan(i * dim_, dim_);
  }
  Label label(std::size_t i) const { return labels_[i]; }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::size_t count(Label label) const;

  /// The min(k, size) nearest points, ascending by (distance, index).
  std::vector<Neighbor> k_nearest(std::span<const double> query, std::size_t k) const;
  /// Nearest point carrying `wanted`; throws NoSuchLabel if none exists.
  Neighbor nearest_with_label(std::span<const double> query, Label wanted) const;

  /// Squared distances from `query` to every point (parallel kernel).
  std::vector<double> distances(std::span<const double> query) const;

  bool operator==(const NeighborIndex&) const = default;

private:
  void check_query(std::span<const double> query) const;

  std::size_t dim_ = 0;
  std::vector<double> points_;
  std::vector<Label> labels_;
};

}  // namespace mixann
