#pragma once

#include <cstdint>
#include <span>

#include "mixann/core_data.hpp"

namespace mixann {

/// Counts with class 1 (minority) as the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct MacroScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

/// Per-class precision / recall / F1 averaged over both classes. Any ratio
/// with a zero denominator counts as 0.
MacroScores macro_scores(const ConfusionMatrix& cm);

inline double macro_f1(std::span<const Label> y_true, std::span<const Label> y_pred) {
  return macro_scores(confusion(y_true, y_pred)).f1;
}

}  // namespace mixann
