#pragma once

// Brute-force reference implementations, written without the library's
// neighbor index or kernels so the comparisons are independent.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "mixann/core_data.hpp"

namespace oracle {

inline double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

/// Full sort of (distance, index) over `candidates`, keeping the first k.
inline std::vector<std::pair<double, std::size_t>> sorted_neighbors(const std::vector<std::vector<double>>& points,
                                                                    const std::vector<double>& query,
                                                                    const std::vector<std::size_t>& candidates,
                                                                    std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i : candidates) all.emplace_back(sqdist(points[i], query), i);
  std::sort(all.begin(), all.end());
  if (all.size() > k) all.resize(k);
  return all;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

inline std::vector<std::vector<double>> features(const mixann::Dataset& d) {
  std::vector<std::vector<double>> out;
  for (const auto& s : d.samples()) out.push_back(s.features);
  return out;
}

/// SMOTE neighbor lists: for minority i, the k nearest other minority points.
inline std::vector<std::vector<std::size_t>> smote_neighbors(const mixann::Dataset& d, int k) {
  const auto pts = features(d);
  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i].label == 1) minority.push_back(i);
  const std::size_t kk = std::min<std::size_t>(k, minority.size() - 1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i : minority) {
    std::vector<std::size_t> others;
    for (std::size_t j : minority)
      if (j != i) others.push_back(j);
    std::vector<std::size_t> row;
    for (auto& [dist, j] : sorted_neighbors(pts, pts[i], others, kk)) row.push_back(j);
    out.push_back(row);
  }
  return out;
}

/// Majority fraction among the k nearest other samples, per minority sample.
inline std::vector<double> majority_fractions(const mixann::Dataset& d, int k) {
  const auto pts = features(d);
  const std::size_t kk = std::min<std::size_t>(k, d.size() - 1);
  std::vector<double> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].label != 1) continue;
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < d.size(); ++j)
      if (j != i) others.push_back(j);
    int maj = 0;
    for (auto& [dist, j] : sorted_neighbors(pts, pts[i], others, kk)) maj += d[j].label == 0;
    out.push_back(static_cast<double>(maj) / static_cast<double>(kk));
  }
  return out;
}

/// 0 = safe, 1 = danger, 2 = noise.
inline std::vector<int> borderline(const mixann::Dataset& d, int k) {
  std::vector<int> out;
  for (double r : majority_fractions(d, k)) out.push_back(r == 1.0 ? 2 : (r >= 0.5 ? 1 : 0));
  return out;
}

/// Largest remainder by exhaustive sort of the fractional parts.
inline std::vector<std::size_t> allocation(const std::vector<double>& weights, std::size_t total) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<double> w = weights;
  if (sum == 0.0) {
    std::fill(w.begin(), w.end(), 1.0);
    sum = static_cast<double>(w.size());
  }
  std::vector<std::size_t> out(w.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double exact = w[i] * static_cast<double>(total) / sum;
    out[i] = static_cast<std::size_t>(std::floor(exact));
    used += out[i];
    rem.emplace_back(-(exact - std::floor(exact)), i);
  }
  std::sort(rem.begin(), rem.end());
  for (std::size_t r = 0; used < total; ++r, ++used) ++out[rem[r % rem.size()].second];
  return out;
}

inline mixann::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d, double minority_rate,
                                      int grid = 0) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> cell(0, std::max(grid, 1));
  std::bernoulli_distribution minority(minority_rate);
  std::vector<mixann::LabeledSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    mixann::LabeledSample s;
    for (std::size_t j = 0; j < d; ++j) s.features.push_back(grid > 0 ? cell(rng) : normal(rng));
    s.label = minority(rng) ? 1 : 0;
    out.push_back(std::move(s));
  }
  return mixann::Dataset(std::move(out), d);
}

}  // namespace oracle
