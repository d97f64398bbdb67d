#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mixann {

using Label = int;  // 0 = majority / normal, 1 = minority / anomaly

struct LabeledSample {
  std::vector<double> features;
  Label label = 0;

  bool operator==(const LabeledSample&) const = default;
};

/// Immutable, dimension-checked sample collection. Construction validates
/// that every sample is finite, has length `dim` and carries a label in {0,1}.
class Dataset {
public:
  Dataset() = default;
  Dataset(std::vector<LabeledSample> samples, std::size_t dim);

  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return samples_.empty(); }

  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }

  std::size_t count(Label label) const;
  bool has_both_classes() const { return count(0) > 0 && count(1) > 0; }
  std::vector<std::size_t> indices_of(Label label) const;
  std::vector<Label> labels() const;

  Dataset subset(std::span<const std::size_t> indices) const;
  /// Returns a new dataset with `extra` appended (dimension-checked).
  Dataset concat(std::span<const LabeledSample> extra) const;

  bool operator==(const Dataset&) const = default;

private:
  std::vector<LabeledSample> samples_;
  std::size_t dim_ = 0;
};

Dataset load_csv(const std::filesystem::path& path);
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

struct SplitSpec {
  double test_fraction = 0.2;
  double val_fraction_of_train = 0.2;
  bool stratified = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct Splits {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Partition sizes: |test| = round(test_fraction * N), |val| =
/// round(val_fraction_of_train * (N - |test|)), remainder to train. Indices in
/// each partition are ascending (original row order is kept).
SplitIndices split_indices(const Dataset& dataset, const SplitSpec& spec);
Splits split(const Dataset& dataset, const SplitSpec& spec);

struct ToySpec {
  int majority_count = 600;
  int minority_count = 30;
  int minority_clusters = 3;
  double spread = 1.0;
  std::uint64_t seed = 7;
};

/// 2-D majority blob at the origin (stddev `spread`) with minority clusters
/// (stddev 0.3 * spread) on a ring of radius 3 * spread. Majority rows come
/// first, then minority rows cluster by cluster.
Dataset make_toy(const ToySpec& spec);

/// Splits `total` units over groups proportionally to `weights` with the
/// largest-remainder rule (remainder ties go to the lower index). The result
/// sums to `total` exactly when at least one weight is positive.
std::vector<std::size_t> largest_remainder(std::span<const double> weights, std::size_t total);

/// Half-away-from-zero rounding used throughout for sizes and actions.
inline long long round_half_away(double x) { return std::llround(x); }

}  // namespace mixann
